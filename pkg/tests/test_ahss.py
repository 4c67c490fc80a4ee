"""Space cohomology builtins, Kunneth assembly, the ko<0..4> page."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a1ext.ahss import (
    AhssError,
    bc2n_space,
    cp_space,
    ko4_ahss,
    kunneth,
    resolve_extensions,
    rp_space,
    space_builtin,
    space_power,
)
from a1ext.groups import FinAbGroup, parse_group


def test_rp_space_tables():
    x = rp_space(12)
    assert not x.validate()
    assert str(x.integral_at(0)) == "Z"
    assert str(x.integral_at(2)) == "Z/2"
    assert str(x.integral_at(3)) == "0"
    # d2 on the degree-2 class is an isomorphism (Sq2 x^2 = x^4)
    assert x.sq2_at(2).rows == [1]
    # d3 is nonzero exactly on x^p with p = 3 mod 4
    assert x.delta3_at(3).rows == [1]
    assert x.delta3_at(2).is_zero()
    assert x.delta3_at(5).is_zero()
    assert x.delta3_at(7).rows == [1]


def test_cp_space():
    x = cp_space(12)
    assert not x.validate()
    # Sq2 on the degree-2 class squares it
    assert x.sq2_at(2).rows == [1]
    assert x.sq2_at(4).is_zero()
    assert all(x.delta3_at(p) is not None and x.delta3_at(p).is_zero()
               for p in range(9))


def test_bc2n_space():
    x = bc2n_space(2, 12)
    assert not x.validate()
    assert str(x.integral_at(2)) == "Z/4"
    assert x.sq1[1].is_zero()      # Sq1 a = 0
    assert x.sq2_at(2).rows == [1]  # Sq2 b = b^2


def test_space_builtin_parsing():
    assert space_builtin("RPinf", 8).name.startswith("RP")
    assert space_builtin("BC2n(3)", 8).integral_at(2) == FinAbGroup.cyclic(8)
    assert space_builtin("CPinf", 8).name.startswith("CP")
    with pytest.raises(ValueError):
        space_builtin("torus", 8)


def test_kunneth_c2_c4():
    X = kunneth(rp_space(10), bc2n_space(2, 10))
    assert X.integral_at(6) == parse_group("Z/4 + (Z/2)^3")
    # mod-2 dims from the graded tensor of two polynomial rings
    assert X.mod2_dim(2) == 3
    assert X.mod2_dim(3) == 4


def test_kunneth_unit_and_products():
    # X x point = X: a point is CP truncated to degree 0... use rp and check
    # against itself via dims of the square
    X = kunneth(rp_space(8), rp_space(8))
    assert X.mod2_dim(2) == 3
    assert X.integral_at(4) == parse_group("(Z/2)^3")
    assert X.integral_at(3) == parse_group("Z/2")
    cube = space_power(rp_space(8), 3)
    assert cube.integral_at(4) == parse_group("(Z/2)^7")
    assert cube.mod2_dim(2) == 6


def test_kunneth_associative_dims():
    a = kunneth(kunneth(rp_space(8), cp_space(8)), rp_space(8))
    b = kunneth(rp_space(8), kunneth(cp_space(8), rp_space(8)))
    for p in range(7):
        assert a.mod2_dim(p) == b.mod2_dim(p)
        assert a.integral_at(p) == b.integral_at(p)


def test_c2_page_vanishes():
    res = ko4_ahss(rp_space(12), 5)
    assert res.certificate == "exact"
    assert res.naive_sum().is_trivial()


def test_rp_powers_pages():
    want_cells = {
        1: {(1, -1): "Z/2", (2, -2): "Z/2", (4, -4): "Z/2"},
        2: {(1, -1): "(Z/2)^2", (2, -2): "(Z/2)^3", (4, -4): "(Z/2)^3"},
        3: {(1, -1): "(Z/2)^3", (2, -2): "(Z/2)^6", (4, -4): "(Z/2)^7"},
    }
    for k, cells in want_cells.items():
        res = ko4_ahss(space_power(rp_space(10), k), 4)
        assert res.certificate == "exact"
        for cell, text in cells.items():
            assert res.e_inf[cell] == parse_group(text), (k, cell)
        assert res.torsion_length == sum(
            parse_group(t).two_length() for t in cells.values())


def test_extension_resolution():
    res1 = ko4_ahss(rp_space(10), 4)
    assert resolve_extensions(res1, "maximal_torsion") == parse_group("Z/8")
    assert resolve_extensions(res1, "sw_oracle", k=1) == parse_group("Z/8")
    res2 = ko4_ahss(space_power(rp_space(10), 2), 4)
    assert resolve_extensions(res2, "sw_oracle", k=2) == parse_group("(Z/8)^2 + Z/4")
    res3 = ko4_ahss(space_power(rp_space(10), 3), 4)
    assert resolve_extensions(res3, "sw_oracle", k=3) == parse_group(
        "(Z/8)^3 + (Z/4)^3 + Z/2")


def test_torsion_length_conservation():
    for k in (1, 2, 3):
        res = ko4_ahss(space_power(rp_space(10), k), 4)
        group = resolve_extensions(res, "sw_oracle", k=k)
        assert group.two_length() == res.torsion_length


def test_bounds_only_blocks_resolution():
    X = kunneth(rp_space(10), bc2n_space(2, 10))
    res = ko4_ahss(X, 5)
    assert res.certificate == "bounds-only"
    with pytest.raises(AhssError):
        resolve_extensions(res, "maximal_torsion")


def test_sanity_mode_naive_sum():
    # with no differentials firing, the result is just the diagonal sum:
    # true for the k = 2 page, where every pertinent differential vanishes
    res = ko4_ahss(space_power(rp_space(10), 2), 4)
    assert res.naive_sum() == FinAbGroup(0, (2,) * 8)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_kunneth_commutes(i, j):
    a = kunneth(space_power(rp_space(8), i), cp_space(8))
    b = kunneth(cp_space(8), space_power(rp_space(8), i))
    for p in range(7):
        assert a.mod2_dim(p) == b.mod2_dim(p)
        assert a.integral_at(p) == b.integral_at(p)
