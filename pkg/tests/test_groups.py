import pytest
from hypothesis import given
from hypothesis import strategies as st

from leavitt_k.groups import (QUOT, TORS, FgAbGroup, SymbolicGroup, direct_sum,
                              invariant_form, parse_group)


def test_invariant_form_merges_coprime():
    assert invariant_form([2, 3]) == (6,)
    assert invariant_form([2, 4, 3, 9]) == (6, 36)
    assert invariant_form([1, 1]) == ()


@given(st.lists(st.integers(1, 60), max_size=5))
def test_invariant_form_is_a_chain_of_the_same_order(orders):
    fs = invariant_form(orders)
    prod = 1
    for x in orders:
        prod *= x
    out = 1
    for f in fs:
        out *= f
    assert out == prod
    assert all(b % a == 0 for a, b in zip(fs, fs[1:]))
    # counts of k-torsion agree for every k
    g = FgAbGroup.from_orders(0, orders)
    from math import gcd
    for k in range(1, 13):
        expected = 1
        for x in orders:
            expected *= gcd(k, x)
        assert g.count_killed_by(k) == expected


def test_rejects_bad_chain():
    with pytest.raises(ValueError):
        FgAbGroup(0, (3, 2))
    with pytest.raises(ValueError):
        FgAbGroup(0, (1,))


@pytest.mark.parametrize("g,text", [
    (FgAbGroup(), "0"),
    (FgAbGroup(1), "Z"),
    (FgAbGroup(2, (3, 9)), "Z^2 + Z/3 + Z/9"),
    (FgAbGroup(0, (2,)), "Z/2"),
])
def test_render(g, text):
    assert str(g) == text
    assert parse_group(text) == g


def test_parse_normalizes():
    assert parse_group("Z/2 + Z + Z/3") == FgAbGroup(1, (6,))
    assert parse_group("Z/1 + 0") == FgAbGroup()
    assert parse_group("Z^0") == FgAbGroup()


@pytest.mark.parametrize("bad", ["", "Z/", "Z^", "Z^-1", "k* +", "Z/x", "Q/2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_group(bad)


def test_symbolic_render_and_parse():
    g = SymbolicGroup((("k*", "pow", 2), ("k*", QUOT, 3), ("k*", TORS, 4)), FgAbGroup(0, (2,)))
    text = str(g)
    assert text == "Z/2 + k*^2 + k*/(k*)^3 + k*[4]"
    assert parse_group(text) == g
    assert parse_group("sym:k*") == SymbolicGroup.named("k*")


def test_symbolic_quotient_by_one_vanishes():
    assert SymbolicGroup((("k*", QUOT, 1),)).simplify() == FgAbGroup()


def test_direct_sum_mixed():
    s = direct_sum(SymbolicGroup.named("k*"), FgAbGroup(1), SymbolicGroup.named("k*"))
    assert str(s) == "Z + k*^2"
    assert not s.is_free


def test_power():
    assert FgAbGroup(1, (2,)) ** 3 == FgAbGroup(3, (2, 2, 2))
    assert str(SymbolicGroup.named("k*") ** 3) == "k*^3"
    assert SymbolicGroup.named("k*") ** 0 == FgAbGroup()


groups = st.builds(lambda r, t: FgAbGroup.from_orders(r, t),
                   st.integers(0, 3), st.lists(st.integers(2, 30), max_size=3))


@given(groups)
def test_round_trip_property(g):
    assert parse_group(str(g)) == g
