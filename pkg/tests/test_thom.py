"""Wu-formula actions, Thom modules, twisted modules, the SW bundle oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a1ext.modules import submodule, standard_module, validate
from a1ext.thom import (
    SWPolynomial,
    bo_algebra,
    bundle_order_lower_bound,
    line_bundle_algebra,
    sw_generator,
    sw_inverse_series,
    sw_one,
    sw_vanishes_below_5,
    thom_module,
    twisted_bz_module,
    virtual_bundle_sw,
    wu_sq,
)


def w(alg, j):
    return sw_generator(alg, f"w{j}")


def test_wu_low_squares():
    alg = bo_algebra(8, 12)
    assert wu_sq(1, w(alg, 2)).render() == "w1 w2 + w3"
    assert wu_sq(2, w(alg, 3)).render() == "w1 w4 + w2 w3 + w5"
    assert wu_sq(1, w(alg, 1)).render() == "w1^2"
    assert wu_sq(3, w(alg, 4)).render() == "w1 w6 + w2 w5 + w3 w4 + w7"
    # instability: Sq^i kills classes of degree < i, Sq^deg squares
    assert wu_sq(2, w(alg, 1)).is_zero()
    assert wu_sq(3, w(alg, 3)).render() == "w3^2"
    # classes above the rank vanish: over BO(2) the formula drops w3
    small = bo_algebra(2, 8)
    assert wu_sq(1, sw_generator(small, "w2")).render() == "w1 w2"


def test_wu_cartan_powers():
    alg = bo_algebra(2, 12)
    w1 = w(alg, 1)
    for i in range(1, 5):
        for j in range(0, 5):
            got = wu_sq(j, w1 ** i)
            # Sq^j w1^i = C(i, j) w1^{i+j}
            from a1ext.steenrod import binom2

            expected = (w1 ** (i + j)) if binom2(i, j) else (w1 + w1)
            assert got.terms == expected.terms or (got.is_zero() and not binom2(i, j))


def test_sq1_squared_vanishes_on_polynomials():
    alg = bo_algebra(4, 12)
    poly = w(alg, 2) * w(alg, 3) + w(alg, 1) ** 2 * w(alg, 3)
    assert wu_sq(1, wu_sq(1, poly)).is_zero()


def test_inverse_series():
    comps = sw_inverse_series(2, 6)
    assert comps[0].is_one()
    assert comps[1].render() == "w1"
    assert comps[2].render() == "w1^2 + w2"
    # multiplying back by the total class gives 1 through the truncation
    alg = comps[0].algebra
    total = sw_one(alg) + w(alg, 1) + w(alg, 2)
    prod = total
    acc = comps[0]
    for c in comps[1:]:
        acc = acc + c
    assert (total * acc).is_one()


def test_mo1_module():
    m = thom_module("MO", 1, shift=0, truncation=10)
    assert m.min_degree == 1
    # Sq1(x^n U) = (n+1) x^{n+1} U; Sq2(x^n U) = (n(n+1)/2) x^{n+2} U
    for d in range(1, 9):
        n = d - 1
        assert m.sq_at(1, d).rows == ([1] if (n + 1) % 2 else [0])
        want = (n * (n + 1) // 2) % 2
        assert m.sq_at(2, d).rows == [want]
    assert validate(m).ok


def test_mo2_joker():
    m = thom_module("MO", 2, shift=-2, truncation=12)
    assert m.min_degree == 0
    # Sq2 Sq1 U = (w1^3 + w1 w2) U
    img = m.sq_at(2, 1).apply(m.sq_at(1, 0).apply(1))
    labels = [m.label(3, i) for i in range(m.dim(3)) if (img >> i) & 1]
    assert labels == ["w1 w2 U", "w1^3 U"]
    # the A(1)-span of the Thom class is the joker
    sub = submodule(m, [(0, 1)])
    j = standard_module("J")
    assert sub.dims == j.dims and sub.min_degree == 0
    for d in j.degrees():
        for jump in (1, 2):
            assert sub.sq_at(jump, d).rank() == j.sq_at(jump, d).rank()
    assert validate(m).ok


def test_mto2_trivial_summand():
    m = thom_module("MTO", 2, shift=2, truncation=10)
    assert m.min_degree == 0
    # Sq1 U = w1 U, Sq2 U = (w1^2 + w2) U
    assert m.sq_at(1, 0).apply(1) != 0
    img = m.sq_at(2, 0).apply(1)
    labels = [m.label(2, i) for i in range(m.dim(2)) if (img >> i) & 1]
    assert labels == ["w2 U'", "w1^2 U'"]
    # w2 U generates a trivial F2 summand: Sq1 and Sq2 kill it
    w2_idx = [i for i in range(m.dim(2)) if m.label(2, i) == "w2 U'"][0]
    assert m.sq_at(1, 2).apply(1 << w2_idx) == 0
    assert m.sq_at(2, 2).apply(1 << w2_idx) == 0
    assert validate(m).ok


def test_mo3_low_structure():
    m = thom_module("MO", 3, shift=-3, truncation=12)
    # Sq1(w1 w3 U) = w1^2 w3 U
    src = [i for i in range(m.dim(4)) if m.label(4, i) == "w1 w3 U"][0]
    img = m.sq_at(1, 4).apply(1 << src)
    labels = [m.label(5, i) for i in range(m.dim(5)) if (img >> i) & 1]
    assert labels == ["w1^2 w3 U"]
    assert validate(m).ok


def test_mso3_has_no_w1():
    m = thom_module("MSO", 3, shift=-3, truncation=10)
    assert m.sq_at(1, 0).is_zero()          # Sq1 U = w1 U = 0
    assert m.dim(1) == 0                     # no degree-1 classes at all
    img = m.sq_at(2, 0).apply(1)
    labels = [m.label(2, i) for i in range(m.dim(2)) if (img >> i) & 1]
    assert labels == ["w2 U"]
    assert validate(m).ok


def test_mo_dims_are_monomial_counts():
    m = thom_module("MO", 3, shift=-3, truncation=10)
    # Thom isomorphism: dims equal monomial counts in w1, w2, w3
    alg = bo_algebra(3, 10)
    for d in range(11):
        assert m.dim(d) == len(alg.monomials_of_degree(d))


def test_twisted_modules():
    m2 = twisted_bz_module(2, truncation=12)
    assert m2.min_degree == 0 and m2.dims == (1,) * 13
    # the shifted projective pattern: Sq1 on odd degrees, Sq2 on 0, 1 mod 4
    assert not m2.sq_at(1, 1).is_zero() and m2.sq_at(1, 2).is_zero()
    assert not m2.sq_at(2, 0).is_zero() and m2.sq_at(2, 2).is_zero()
    assert m2.metadata["bockstein_pairs"] == ()
    assert validate(m2).ok

    m3 = twisted_bz_module(3, truncation=12)
    assert m3.sq_at(1, 0).is_zero() and m3.sq_at(1, 5).is_zero()
    assert not m3.sq_at(2, 0).is_zero() and not m3.sq_at(2, 1).is_zero()
    assert m3.sq_at(2, 2).is_zero()
    assert (1, 2) in m3.metadata["bockstein_pairs"]
    assert m3.metadata["bockstein_order"] == 4
    assert validate(m3).ok

    tiny = twisted_bz_module(3, truncation=0)
    assert tiny.dims == (1,)


def test_virtual_bundle_orders():
    # lambda_{1,2} over (RP^4)^2: vanishes in degree 1, k = 1..3 nontrivial,
    # k = 4 and 8 vanish below degree 5
    p1 = virtual_bundle_sw(2, [1, 2], 1)
    assert p1.component(1).is_zero()
    assert not p1.is_one()
    for k in (2, 3, 5, 6, 7):
        assert not sw_vanishes_below_5(2, [1, 2], k), k
    for k in (4, 8):
        assert sw_vanishes_below_5(2, [1, 2], k), k
    # triple products over (RP^4)^3 die after doubling
    assert not sw_vanishes_below_5(3, [1, 2, 3], 1)
    assert sw_vanishes_below_5(3, [1, 2, 3], 2)
    # single factors behave like the projective-space bundle: order 8
    assert bundle_order_lower_bound(1, [1]) == 8
    assert bundle_order_lower_bound(2, [1, 2]) == 4
    assert bundle_order_lower_bound(3, [1, 2, 3]) == 2


def test_virtual_bundle_validation():
    with pytest.raises(ValueError):
        virtual_bundle_sw(2, [], 1)
    with pytest.raises(ValueError):
        virtual_bundle_sw(2, [3], 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(6, 10))
def test_inverse_series_identity(n, truncation):
    comps = sw_inverse_series(n, truncation)
    alg = comps[0].algebra
    total = sw_one(alg)
    for j in range(1, n + 1):
        total = total + sw_generator(alg, f"w{j}")
    acc = comps[0]
    for c in comps[1:]:
        acc = acc + c
    assert (total * acc).is_one()


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["MO", "MTO", "MSO"]), st.integers(1, 3))
def test_thom_modules_validate(kind, n):
    if kind == "MSO" and n < 2:
        n = 2
    m = thom_module(kind, n, shift=0, truncation=9)
    assert validate(m).ok
