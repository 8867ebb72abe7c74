"""Siegel series and exact Fourier coefficients of Siegel Eisenstein series.

For a positive definite half-integral matrix B of rank n the local factor
F_p(B; X) is a polynomial with integer coefficients and constant term 1,
of degree at most d = ord_p of the discriminant of B.  We evaluate it by
Katsurada's recursion, peeling Jordan blocks of largest scale one at a time
(two at a time where the rank-one step does not apply at p = 2), at the
rational nodes X = p^j, and recover the polynomial by Lagrange
interpolation.  The Fourier coefficient then combines the local factors
with Gamma factors and zeta and L normalisations in exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import AnalyticScalar, DirichletCharacter, gamma_half, l_value, zeta_value
from .padic import jordan_decompose, local_invariants, merge_blocks, with_unit
from .roots import RootSystem, component_gram


def _sgn(t: int) -> int:
    return -1 if t % 2 else 1


def _without(blocks, peeled):
    out = list(blocks)
    for b in peeled:
        out.remove(b)
    return tuple(out)


def _peel_rank1(blocks, p, x, b1, rest):
    inv_b = local_invariants(blocks, p)
    inv_r = local_invariants(rest, p)
    if inv_r.i is not None:
        assert b1[1] >= inv_r.i - 1 + (2 if p == 2 else 0)
    n = inv_b.n
    q = Fraction(p)
    if n % 2 == 0:
        xi = inv_b.xi
        den = 1 - q ** (n + 1) * x * x
        c1 = (1 - q ** (n // 2) * xi * x) / den
        c0 = (
            _sgn(xi + 1)
            * inv_b.xi_prime
            * inv_r.eta
            * (1 - q ** (n // 2 + 1) * x * xi)
            * (q ** (n // 2) * x) ** (inv_b.delta - inv_r.delta + xi * xi)
            * q ** (inv_b.delta // 2)
            / den
        )
    else:
        xi_r = inv_r.xi
        den = 1 - q ** ((n + 1) // 2) * xi_r * x
        c1 = 1 / den
        c0 = (
            _sgn(xi_r)
            * inv_r.xi_prime
            * inv_b.eta
            * (q ** ((n - 1) // 2) * x) ** (inv_b.delta - inv_r.delta + 2 - xi_r * xi_r)
            * q ** ((2 * inv_b.delta - inv_r.delta + 2) // 2)
            / den
        )
    return c1 * _f_eval(rest, p, p * x) + c0 * _f_eval(rest, p, x)


def _peel_rank2(blocks, x, peeled, rest):
    """Remove a unit pair or an even 2x2 block of top scale m at p = 2."""
    m = peeled[0][1]
    inv_b = local_invariants(blocks, 2)
    inv_r = local_invariants(rest, 2)
    if inv_r.i is not None:
        assert m >= inv_r.i + 1
    tilde = with_unit(rest, m, 2)
    inv_t = local_invariants(tilde, 2)
    n = inv_b.n
    delta, dhat, dtil = inv_b.delta, inv_r.delta, inv_t.delta
    pair = peeled[0][0] == "u"
    two = Fraction(2)
    if n % 2 == 0:
        xi, xip = inv_b.xi, inv_b.xi_prime
        xih, xiph = inv_r.xi, inv_r.xi_prime
        if (pair and inv_r.d % 2 == 1) or (not pair and xih == 0):
            sigma = (2 * dtil - delta - dhat + 2) // 2
        else:
            sigma = 0
        if pair and inv_r.d % 2 == 0:
            eta_t = local_invariants(with_unit(rest, m, 2, peeled[1][2]), 2).eta
        elif not pair and xih != 0:
            eta_t = inv_t.eta
        else:
            eta_t = 1

        def c11(t):
            return (1 - two ** (n // 2) * xi * t) / (1 - two ** (n + 1) * t * t)

        def c10(t):
            return (
                _sgn(xi + 1)
                * xip
                * eta_t
                * (1 - two ** (n // 2 + 1) * t * xi)
                * (two ** (n // 2) * t) ** (delta - dtil + xi * xi + sigma)
                * two ** (delta // 2)
                / (1 - two ** (n + 1) * t * t)
            )

        def c21(t):
            return 1 / (1 - two ** (n // 2) * xih * t)

        def c20(t):
            return (
                _sgn(xih)
                * xiph
                * eta_t
                * (two ** ((n - 2) // 2) * t) ** (dtil - dhat + 2 - xih * xih - sigma)
                * two ** ((2 * dtil - dhat + 2 - 2 * sigma) // 2)
                / (1 - two ** (n // 2) * xih * t)
            )

    else:
        eta, etah = inv_b.eta, inv_r.eta
        xit = 1 if not pair and inv_t.d % 2 == 0 else 0
        sigma = 2 * xit

        def c11(t):
            return Fraction(1) / (1 - two ** ((n + 1) // 2) * xit * t)

        def c10(t):
            return (
                _sgn(xit)
                * eta
                * (two ** ((n - 1) // 2) * t) ** (delta - dtil + 2 - xit * xit + sigma)
                * two ** ((2 * delta - dtil + 2 + sigma) // 2)
                / (1 - two ** ((n + 1) // 2) * xit * t)
            )

        def c21(t):
            return (1 - two ** ((n - 1) // 2) * xit * t) / (1 - two**n * t * t)

        def c20(t):
            return (
                _sgn(xit + 1)
                * etah
                * (1 - two ** ((n + 1) // 2) * t * xit)
                * (two ** ((n - 1) // 2) * t) ** (dtil - dhat + xit * xit - sigma)
                * two ** ((dtil - sigma) // 2)
                / (1 - two**n * t * t)
            )

    return (
        c11(x) * c21(2 * x) * _f_eval(rest, 2, 4 * x)
        + c11(x) * c20(2 * x) * _f_eval(rest, 2, 2 * x)
        + c10(x) * c21(x) * _f_eval(rest, 2, 2 * x)
        + c10(x) * c20(x) * _f_eval(rest, 2, x)
    )


@lru_cache(maxsize=1 << 18)
def _f_eval(blocks, p, x) -> Fraction:
    """F_p(B; x) by the peel chain, for rational x away from the poles of
    the intermediate coefficients (powers of p always are)."""
    if not blocks or x == 0:
        return Fraction(1)
    if local_invariants(blocks, p).d == 0:
        return Fraction(1)
    top = max(b[1] for b in blocks)
    if p != 2:
        b1 = blocks[-1]
        assert b1[1] == top
        return _peel_rank1(blocks, p, x, b1, blocks[:-1])
    units = [b for b in blocks if b[1] == top and b[0] == "u"]
    if len(units) >= 2:
        assert len(units) == 2  # canonical forms carry at most two per scale
        peeled = tuple(units)
        return _peel_rank2(blocks, x, peeled, _without(blocks, peeled))
    if len(units) == 1:
        return _peel_rank1(blocks, 2, x, units[0], _without(blocks, units))
    evens = [b for b in blocks if b[1] == top and b[0] == "h"]
    evens = evens or [b for b in blocks if b[1] == top]
    peeled = (evens[0],)
    return _peel_rank2(blocks, x, peeled, _without(blocks, peeled))


def _lagrange(points):
    k = len(points)
    coeffs = [Fraction(0)] * k
    for j, (xj, yj) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for i, (xi, _) in enumerate(points):
            if i == j:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xi * basis[t + 1]
            denom *= xj - xi
        w = yj / denom
        for t, c in enumerate(basis):
            coeffs[t] += w * c
    return coeffs


@lru_cache(maxsize=None)
def f_polynomial(blocks, p: int) -> tuple[int, ...]:
    """Coefficients of F_p(B; X), nondecreasing degree order."""
    d = local_invariants(blocks, p).d
    if d == 0:
        return (1,)
    nodes = [Fraction(p) ** j for j in range(d + 1)]
    coeffs = _lagrange([(t, _f_eval(blocks, p, t)) for t in nodes])
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    assert all(c.denominator == 1 for c in coeffs), (blocks, p)
    out = tuple(int(c) for c in coeffs)
    assert out[0] == 1, (blocks, p)
    return out


def f_value(blocks, p: int, x) -> Fraction:
    """F_p(B; x) from the interpolated polynomial."""
    acc = Fraction(0)
    for c in reversed(f_polynomial(tuple(blocks), p)):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Block lists for root lattices


@lru_cache(maxsize=None)
def component_blocks(kind: str, rank: int, p: int):
    g = component_gram(kind, rank)
    half = tuple(tuple(Fraction(v, 2) for v in row) for row in g)
    return jordan_decompose(half, p)


def system_blocks(rs: RootSystem, p: int):
    parts = []
    for kind, rank, mult in rs.components:
        parts.extend([component_blocks(kind, rank, p)] * mult)
    if not parts:
        return ()
    return merge_blocks(parts, p)


def _small_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        elif p * p > n:
            out.append(n)
            break
        p += 1 if p == 2 else 2
    return out


# ---------------------------------------------------------------------------
# Global coefficients


@lru_cache(maxsize=None)
def _zeta_norm(n: int, k: int) -> AnalyticScalar:
    acc = zeta_value(k)
    for i in range(1, n // 2 + 1):
        acc = acc * zeta_value(2 * k - 2 * i)
    return acc.inverse()


@lru_cache(maxsize=None)
def _l_norm(s: int, disc: int) -> AnalyticScalar:
    return l_value(s, DirichletCharacter.from_discriminant(disc))


def _coefficient(n: int, dim: int, det_b: Fraction, blocks_by_p: dict) -> Fraction:
    if n == 0:
        return Fraction(1)
    assert dim % 2 == 0 and n <= dim
    k = dim // 2
    assert (n * k) % 2 == 0
    total = AnalyticScalar.from_rational(
        Fraction(_sgn(n * k // 2)) * Fraction(2) ** (n * k - n * (n - 1) // 2)
    )
    e = 2 * k - n - 1  # det B enters with exponent e / 2
    if n % 2:
        assert e % 2 == 0
        total = total * det_b ** (e // 2)
    else:
        total = total * AnalyticScalar.sqrt_rational(det_b**e)
    for i in range(2 * k - n + 1, 2 * k + 1):
        total = (total / gamma_half(i)).times_pi_half(i)
    total = total * _zeta_norm(n, k)
    for p, blocks in blocks_by_p.items():
        total = total * f_value(blocks, p, Fraction(1, p**k))
    if n % 2 == 0:
        disc_b = det_b * Fraction(4) ** (n // 2)
        assert disc_b.denominator == 1
        total = total * _l_norm(k - n // 2, _sgn(n // 2) * int(disc_b))
    a = total.as_fraction()
    if n in (dim - 1, dim):
        a /= 2
    return a


def eisenstein_coefficient(rs: RootSystem, dim: int) -> Fraction:
    """Fourier coefficient of the weight dim/2 Siegel Eisenstein series at
    half the Gram matrix of the given root system."""
    n = rs.rank
    if n == 0:
        return Fraction(1)
    det_b = Fraction(rs.det, 2**n)
    blocks_by_p = {}
    for p in sorted({2, *_small_factors(rs.det)}):
        blocks = system_blocks(rs, p)
        if local_invariants(blocks, p).d:
            blocks_by_p[p] = blocks
    return _coefficient(n, dim, det_b, blocks_by_p)


def coefficient_for_gram(gram, dim: int) -> Fraction:
    """Same coefficient for an arbitrary even positive definite Gram matrix."""
    n = len(gram)
    half = tuple(tuple(Fraction(v, 2) for v in row) for row in gram)
    det_b = _det(half)
    assert det_b > 0
    disc = det_b * Fraction(4) ** (n // 2)
    assert disc.denominator == 1
    blocks_by_p = {}
    for p in sorted({2, *_small_factors(int(disc))}):
        blocks = jordan_decompose(half, p)
        if local_invariants(blocks, p).d:
            blocks_by_p[p] = blocks
    return _coefficient(n, dim, det_b, blocks_by_p)


def scalar_coefficient(m: int, dim: int) -> Fraction:
    """Coefficient at the 1x1 matrix (m): the average number of vectors of
    norm 2m over the genus, Eisenstein normalised."""
    assert m >= 1
    return coefficient_for_gram(((2 * m,),), dim)


def _det(mat) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for t in range(c, n):
                a[r][t] -= f * a[c][t]
    return out
