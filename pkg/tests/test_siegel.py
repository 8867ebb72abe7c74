"""Local Siegel series and Eisenstein coefficients."""

import random
from fractions import Fraction

from latmass.padic import (
    _diag_over_qp,
    _hasse_kitaoka,
    hilbert_symbol,
    local_invariants,
    merge_blocks,
    with_unit,
)
from latmass.roots import RootSystem
from latmass.siegel import (
    _f_eval,
    component_blocks,
    eisenstein_coefficient,
    f_polynomial,
    f_value,
    scalar_coefficient,
    system_blocks,
)


def test_rank_one_polynomials():
    for p in (2, 3, 5, 7):
        for c in ((1,) if p == 2 else (1, 2)):
            assert f_polynomial((("u", 1, c),), p) == (1, p)
    assert f_polynomial((("u", 2, 1),), 2) == (1, 2, 4)
    assert f_polynomial((("u", 3, 3),), 2) == (1, 2, 4, 8)
    assert f_polynomial((("u", 2, 2),), 3) == (1, 3, 9)
    assert f_value((("u", 1, 1),), 2, Fraction(1, 16)) == Fraction(9, 8)
    assert f_value((("u", 2, 1),), 2, Fraction(1, 16)) == Fraction(73, 64)


def test_unimodular_blocks_are_trivial():
    assert f_polynomial((("h", 0, 0),) * 4, 2) == (1,)
    assert f_polynomial((("y", 0, 0),), 2) == (1,)
    assert f_polynomial((("u", 0, 1), ("u", 0, 1)), 2) == (1,)
    assert f_polynomial((("u", 0, 1), ("u", 0, 2)), 3) == (1,)


def test_degree_can_drop():
    # A2 at p = 3 has d = 1 but F is identically 1
    blocks = system_blocks(RootSystem.parse("A2"), 3)
    assert blocks == (("u", 0, 1), ("u", 1, 1))
    assert f_polynomial(blocks, 3) == (1,)


def test_e8_is_hyperbolic_at_2():
    assert system_blocks(RootSystem.parse("E8"), 2) == (("h", 0, 0),) * 4
    assert f_polynomial(system_blocks(RootSystem.parse("E8"), 2), 2) == (1,)


def _random_blocks(rng, p):
    raw = []
    for _ in range(rng.randint(1, 4)):
        e = rng.randint(0, 3)
        if p == 2 and rng.random() < 0.4:
            raw.append((rng.choice("hy"), e, 0))
        else:
            residues = [1, 3, 5, 7] if p == 2 else [1, 2]
            raw.append(("u", e, rng.choice(residues)))
    return merge_blocks([tuple(raw)], p)


def test_interpolation_matches_direct_evaluation():
    rng = random.Random(7)
    args = {2: [Fraction(3, 5), Fraction(-1, 3)], 3: [Fraction(1, 2), Fraction(-2, 7)]}
    args[5] = args[3]
    for p in (2, 3, 5):
        for _ in range(40):
            blocks = _random_blocks(rng, p)
            for x in args[p]:
                assert f_value(blocks, p, x) == _f_eval(blocks, p, x)


def test_evaluation_at_zero():
    rng = random.Random(11)
    for p in (2, 3):
        for _ in range(10):
            blocks = _random_blocks(rng, p)
            assert _f_eval(blocks, p, Fraction(0)) == 1
            assert f_value(blocks, p, Fraction(0)) == 1


def test_pair_block_eta_identity():
    # For an even 2x2 block on top of B2 with xi(B2) nonzero, the unit
    # adjoined at the top scale reproduces a product formula in terms of
    # the Hasse invariant of B2 alone.
    rng = random.Random(23)
    found = 0
    while found < 25:
        rest = _random_blocks(rng, 2)
        inv2 = local_invariants(rest, 2)
        if inv2.n % 2 or inv2.xi == 0:
            continue
        m = max(0, (inv2.i if inv2.i is not None else 0) + 1) + rng.randint(0, 2)
        n = inv2.n + 2
        lhs = local_invariants(with_unit(rest, m, 2), 2).eta
        h = _hasse_kitaoka(_diag_over_qp(rest, 2), 2)
        sign = -1 if (((n - 1) ** 2 - 1) // 8) % 2 else 1
        rhs = (
            sign
            * h
            * hilbert_symbol(Fraction(2) ** m, Fraction((-1) ** ((n - 2) // 2)) * inv2.det, 2)
        )
        assert lhs == rhs, (rest, m)
        found += 1


SIGMA_3 = lambda m: sum(d**3 for d in range(1, m + 1) if m % d == 0)
SIGMA_11 = lambda m: sum(d**11 for d in range(1, m + 1) if m % d == 0)


def test_scalar_coefficients_dimension_8():
    for m in range(1, 7):
        assert scalar_coefficient(m, 8) == 240 * SIGMA_3(m)


def test_scalar_coefficients_dimension_24():
    for m in range(1, 4):
        assert scalar_coefficient(m, 24) == Fraction(65520, 691) * SIGMA_11(m)


def test_root_system_coefficients_dimension_8():
    expected = {
        "A1": 240,
        "A2": 13440,
        "A1^2": 30240,
        "A1^3": 1814400,
        "D4": 3628800,
        "E6": 116121600,
        "E7": 348364800,
        "A7": 1045094400,
        "D8": 1393459200,
        "E8": 696729600,
    }
    for name, value in expected.items():
        assert eisenstein_coefficient(RootSystem.parse(name), 8) == value, name


def test_full_rank_nonsquare_det_vanishes():
    assert eisenstein_coefficient(RootSystem.parse("A2 A6"), 8) == 0
    assert eisenstein_coefficient(RootSystem.parse("A1 A2 A5"), 8) != 0


def test_coefficient_dimension_24():
    assert eisenstein_coefficient(RootSystem.parse("A1"), 24) == Fraction(65520, 691)
    assert eisenstein_coefficient(RootSystem.parse("0"), 24) == 1


def test_component_blocks_cached_forms():
    assert component_blocks("A", 1, 2) == (("u", 0, 1),)
    assert component_blocks("D", 4, 2) == merge_blocks([component_blocks("D", 4, 2)], 2)
