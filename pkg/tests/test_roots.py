"""Root system components, orders, Gram matrices, and enumeration."""

from fractions import Fraction

import pytest

from latmass.roots import (
    EMPTY,
    RootSystem,
    component_gram,
    component_roots,
    enumerate_systems,
    normalize_component,
    system_gram,
)


def det(mat):
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
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return out


def test_normalization():
    assert normalize_component("A", 0) == ()
    assert normalize_component("A", -1) == ()
    assert normalize_component("D", 0) == ()
    assert normalize_component("D", 1) == ()
    assert normalize_component("D", 2) == (("A", 1), ("A", 1))
    assert normalize_component("D", 3) == (("A", 3),)
    assert RootSystem.parse("D2") == RootSystem.parse("A1^2")
    assert RootSystem.parse("D3") == RootSystem.parse("A3")


def test_parse_and_str_round_trip():
    for text in ["0", "A1", "A1^2", "A2", "D4", "E8", "A1^2 A3 D5", "Z^3 A1", "A17 E7"]:
        rs = RootSystem.parse(text)
        assert str(rs) == text
        assert RootSystem.parse(str(rs)) == rs
    assert RootSystem.parse("") == EMPTY
    assert str(EMPTY) == "0"
    assert RootSystem.parse("A3 A1^2 D5") == RootSystem.parse("A1^2 A3 D5")


def test_parse_rejects_junk():
    for bad in ["E5", "B2", "A1^", "Q", "A", "E9", "A0", "D1"]:
        with pytest.raises(ValueError):
            RootSystem.parse(bad)


def test_basic_invariants():
    cases = {
        "0": (0, 1, 0, 1, 1),
        "A1": (1, 2, 2, 2, 2),
        "A2": (2, 3, 6, 6, 12),
        "A1^2": (2, 4, 4, 4, 8),
        "A3": (3, 4, 12, 24, 48),
        "D4": (4, 4, 24, 192, 1152),
        "D5": (5, 4, 40, 1920, 3840),
        "E6": (6, 3, 72, 51840, 103680),
        "E7": (7, 2, 126, 2903040, 2903040),
        "E8": (8, 1, 240, 696729600, 696729600),
        "Z": (1, 1, 0, 2, 2),
        "Z^3": (3, 1, 0, 48, 48),
        "Z^2 A1": (3, 2, 2, 16, 16),
    }
    for text, (rank, d, roots, weyl, aut) in cases.items():
        rs = RootSystem.parse(text)
        assert rs.rank == rank, text
        assert rs.det == d, text
        assert rs.root_count == roots, text
        assert rs.weyl_order == weyl, text
        assert rs.aut_order == aut, text


def test_root_counts_formulae():
    for n in range(1, 12):
        assert RootSystem.parse(f"A{n}").root_count == n * (n + 1)
    for n in range(4, 12):
        assert RootSystem.parse(f"D{n}").root_count == 2 * n * (n - 1)


def test_gram_determinants():
    for n in range(1, 9):
        assert det(component_gram("A", n)) == n + 1
    for n in range(4, 9):
        assert det(component_gram("D", n)) == 4
    assert det(component_gram("E", 6)) == 3
    assert det(component_gram("E", 7)) == 2
    assert det(component_gram("E", 8)) == 1
    rs = RootSystem.parse("A2 D4")
    assert det(system_gram(rs)) == rs.det == 12


def test_reflection_closure_counts():
    for kind, rank in [("A", 1), ("A", 2), ("A", 4), ("D", 4), ("D", 5), ("E", 6)]:
        roots = component_roots(kind, rank)
        assert len(roots) == RootSystem.from_parts([(kind, rank)]).root_count
        assert all(tuple(-c for c in v) in roots for v in roots)


def test_remove_and_add():
    rs = RootSystem.parse("A1^2 D4")
    assert rs.remove("A", 1) == RootSystem.parse("A1 D4")
    assert rs.remove("A", 1, 2) == RootSystem.parse("D4")
    assert rs.remove("D", 4).add_parts([("A", 1), ("A", 1)]) == RootSystem.parse("A1^4")
    with pytest.raises(AssertionError):
        rs.remove("E", 8)


def test_small_enumeration_order():
    systems = enumerate_systems(2)
    assert [str(rs) for rs in systems] == ["0", "A1", "A1^2", "A2"]
    s8 = enumerate_systems(8)
    assert s8[0] == EMPTY
    ranks = [rs.rank for rs in s8]
    assert ranks == sorted(ranks)
    for a, b in zip(s8, s8[1:]):
        assert a.sort_key < b.sort_key
    assert RootSystem.parse("E8") in s8
    assert len(set(s8)) == len(s8)


def test_rank_equal_dim_filter():
    systems = enumerate_systems(8, dim=8)
    full = [rs for rs in systems if rs.rank == 8]
    assert all(rs.det == int(rs.det**0.5 + 0.5) ** 2 for rs in full)
    assert RootSystem.parse("E8") in full
    assert RootSystem.parse("A8") in full  # det 9 is a square
    assert RootSystem.parse("A2 A6") not in systems  # det 21 is not
    assert RootSystem.parse("A2 A5") in systems  # rank 7 < dim, never filtered


def test_enumeration_counts():
    assert len(enumerate_systems(32)) == 405844
    assert len(enumerate_systems(32, dim=32)) == 135443
