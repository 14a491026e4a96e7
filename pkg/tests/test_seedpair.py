"""Tests for admissible levels, seed construction, and the g/h families."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hyperquad import contfrac
from hyperquad.exactq import theta_omega_rational, v_sequence_rational
from hyperquad.ffield import f27_preset, make_field
from hyperquad.fpoly import Poly
from hyperquad.seedpair import (
    AdmissibilityError,
    UndefinedValueError,
    admissible_set,
    build_seedpair,
    eval_g,
    eval_h,
    validate_identities,
)

GRID = [
    (p, t, k)
    for p in (3, 5, 7)
    for t in (1, 2)
    for k in admissible_set(p, t)
]


def test_admissible_small_cases():
    assert admissible_set(3, 1) == [1]
    assert admissible_set(5, 1) == [1, 2]
    assert admissible_set(5, 2) == [1, 2, 7, 12]
    assert admissible_set(3, 2) == [1, 4]
    assert admissible_set(7, 2) == [1, 2, 3, 10, 17, 24]


@pytest.mark.parametrize("p,t", [(3, 1), (3, 3), (5, 2), (7, 2), (11, 1)])
def test_admissible_shape(p, t):
    r = p**t
    levels = admissible_set(p, t)
    assert levels == sorted(set(levels))
    assert all(1 <= k <= (r - 1) // 2 for k in levels)
    assert (r - 1) // 2 in levels
    if t == 1:
        assert levels == list(range(1, (p - 1) // 2 + 1))


def test_admissible_rejects_bad_input():
    with pytest.raises(ValueError):
        admissible_set(2, 1)
    with pytest.raises(ValueError):
        admissible_set(9, 1)
    with pytest.raises(ValueError):
        admissible_set(5, 0)


def test_build_smallest_seed():
    sp = build_seedpair(3, 1, 1)
    F = sp.field
    assert sp.theta == F.from_int(1)
    assert sp.omega == F.from_int(-1)
    assert sp.v == (F.from_int(1), F.from_int(-1))
    assert sp.w == (F.from_int(1), F.from_int(-1))
    assert sp.b == (F.from_int(1),)
    assert sp.Pk == Poly(F, [-1, 0, 1])
    assert sp.Qk == Poly.monomial(F, 1)


def test_build_level_two_mod_seven():
    sp = build_seedpair(7, 1, 2)
    F = sp.field
    assert [x.coeffs[0] for x in sp.v] == [3, 5, 1, 1]
    assert sp.Pk == Poly(F, [-1, 0, 1]) ** 2


def test_build_rejects_inadmissible():
    with pytest.raises(AdmissibilityError):
        build_seedpair(3, 1, 2)
    with pytest.raises(AdmissibilityError):
        build_seedpair(5, 2, 3)
    with pytest.raises(AdmissibilityError):
        build_seedpair(5, 1, 0)


@pytest.mark.parametrize("p,t,k", GRID)
def test_grid_expansion_matches_v(p, t, k):
    sp = build_seedpair(p, t, k)
    rec = contfrac.expand_rational(sp.Pk, sp.Qk)
    assert rec.quotients == [Poly.monomial(sp.field, 1, c) for c in sp.v]
    assert rec.verify_determinants()


@pytest.mark.parametrize("p,t,k", GRID)
def test_grid_identities_pass(p, t, k):
    report = validate_identities(build_seedpair(p, t, k))
    assert set(report) == {
        "v_symmetry",
        "g_recursion",
        "g_reciprocal_form",
        "w_recurrence",
        "g_final_form",
        "v_last_value",
        "gh_product_ratio",
        "gh_boundary",
    }
    bad = [name for name, passed in report.items() if not passed]
    assert bad == []


def test_g_endpoint_values():
    for p, t, k in [(3, 1, 1), (5, 1, 2), (7, 2, 10)]:
        sp = build_seedpair(p, t, k)
        zero = sp.field.zero
        assert eval_g(sp, 0, zero) == sp.theta
        assert eval_g(sp, 2 * k, zero) == sp.theta.inverse()
        for i in range(2 * k + 1):
            assert eval_h(sp, i, zero).is_zero()


def test_g_recursion_on_extension_field():
    sp = build_seedpair(3, 1, 1)
    F = f27_preset()
    two_k_theta = F.from_int(2 * sp.k) * F.from_int(sp.theta.coeffs[0])
    for x in F.elements():
        for i in range(2 * sp.k):
            try:
                gi = eval_g(sp, i, x)
                gi1 = eval_g(sp, i + 1, x)
            except UndefinedValueError:
                continue
            if gi.is_zero():
                continue
            vnext = F.from_int(sp.v[i].coeffs[0])
            assert gi1 == two_k_theta * (-vnext + two_k_theta / gi)


def test_product_ratio_identity_sampled():
    sp = build_seedpair(5, 1, 2)
    F = make_field(5, 2)
    omega = F.from_int(sp.omega.coeffs[0])
    for x in F.nonzero_elements():
        for i in range(1, 2 * sp.k + 1):
            try:
                lhs = eval_g(sp, i, x) * eval_g(sp, i - 1, x) * omega
                rhs = eval_h(sp, i - 1, x) / eval_h(sp, i, x)
            except UndefinedValueError:
                continue
            assert lhs == rhs


def test_boundary_identity_sampled():
    sp = build_seedpair(3, 2, 4)
    F = make_field(3, 2)
    for x in F.elements():
        try:
            assert eval_g(sp, 0, x) * eval_h(sp, 0, x) == x
        except UndefinedValueError:
            pass


def test_poles_raise():
    sp = build_seedpair(3, 1, 1)
    F = f27_preset()
    theta = F.from_int(sp.theta.coeffs[0])
    with pytest.raises(UndefinedValueError):
        eval_g(sp, 2, theta)
    with pytest.raises(UndefinedValueError):
        eval_h(sp, 0, -theta)
    with pytest.raises(ValueError):
        eval_g(sp, 3, F.zero)


def test_h_zero_exact_rational():
    # for k = 1 the first family member is x/(theta + x) with theta = -1/2
    sp = build_seedpair(3, 1, 1)
    for x in [Fraction(1, 3), Fraction(2), Fraction(-5, 7)]:
        assert eval_h(sp, 0, x) == 2 * x / (2 * x - 1)
    assert eval_g(sp, 0, Fraction(0)) == Fraction(-1, 2)
    with pytest.raises(UndefinedValueError):
        eval_h(sp, 0, Fraction(1, 2))


@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=6),
    num=st.integers(min_value=-30, max_value=30),
    den=st.integers(min_value=1, max_value=12),
    i=st.integers(min_value=0, max_value=11),
)
def test_g_recursion_exact(k, num, den, i):
    assume(i < 2 * k)
    sp = build_seedpair(13, 1, k) if k <= 6 else None
    x = Fraction(num, den)
    thetaq, _ = theta_omega_rational(k)
    v = v_sequence_rational(k)
    try:
        gi = eval_g(sp, i, x)
        gi1 = eval_g(sp, i + 1, x)
    except UndefinedValueError:
        assume(False)
    assume(gi != 0)
    assert gi1 == 2 * k * thetaq * (-v[i] + 2 * k * thetaq / gi)
