"""Tests for equation building and direct fixed-point expansion."""

import pytest

from hyperquad import contfrac
from hyperquad.ffield import f27_preset, make_field
from hyperquad.fpoly import Poly
from hyperquad.hyper import (
    AlgebraicEquation,
    TypeSpec,
    build_equation,
    check_root,
    expand_alpha,
    _head_continuants,
    _iterate,
    _seed_polys,
)
from hyperquad.laurent import LaurentSeries


def corollary_spec():
    F = f27_preset()
    u = F.u
    return TypeSpec(field=F, t=1, k=1, lambdas=(F.one,), eps1=-(u**6), eps2=u**3)


def deep_alpha(spec, floor):
    Pk, Qk = _seed_polys(spec)
    xs, ys = _head_continuants(spec)
    return _iterate(spec, Pk, Qk, xs, ys, floor)


def test_typespec_rejects_bad_data():
    F = f27_preset()
    u = F.u
    with pytest.raises(ValueError):
        TypeSpec(field=F, t=1, k=2, lambdas=(F.one,), eps1=u, eps2=u)
    with pytest.raises(ValueError):
        TypeSpec(field=F, t=1, k=1, lambdas=(), eps1=u, eps2=u)
    with pytest.raises(ValueError):
        TypeSpec(field=F, t=1, k=1, lambdas=(F.zero,), eps1=u, eps2=u)
    other = make_field(3, 2)
    with pytest.raises(ValueError):
        TypeSpec(field=F, t=1, k=1, lambdas=(F.one,), eps1=other.u, eps2=u)


def test_worked_equation_matches_known_form():
    spec = corollary_spec()
    F, u = spec.field, spec.field.u
    eq = build_equation(spec)
    assert eq.lead == Poly.one(F)
    assert eq.second == Poly.monomial(F, 1, -F.one)
    assert eq.linear == Poly.monomial(F, 1, -(u**3))
    assert eq.constant == Poly(F, [-(u**6), F.zero, u])
    # with a monic head continuant the normalized form is the same object
    norm = eq.normalized()
    assert norm.lead == eq.lead and norm.constant == eq.constant


def test_generic_single_head_equation():
    F = make_field(5, 1)
    lam = F.from_int(2)
    spec = TypeSpec(field=F, t=1, k=2, lambdas=(lam,), eps1=F.from_int(3), eps2=F.one)
    eq = build_equation(spec)
    assert eq.lead == Poly.one(F)
    assert eq.second == Poly.monomial(F, 1, -lam)
    # with y_0 = 0 the linear term collapses to -eps2*Qk
    Pk, Qk = _seed_polys(spec)
    assert eq.linear == -Qk
    assert eq.constant == Pk.scaled(-F.from_int(3)) + Qk.scaled(lam).shifted(1)


def test_worked_expansion_first_quotients():
    spec = corollary_spec()
    F, u = spec.field, spec.field.u
    rec = expand_alpha(spec, 5)
    want = [F.one, u**7, u**2, u**11, -u]
    assert rec.quotients == [Poly.monomial(F, 1, c) for c in want]
    assert rec.provenance == "direct"
    assert rec.verify_determinants()


def test_expansion_head_and_leading_degree():
    F9 = make_field(3, 2)
    u = F9.u
    spec = TypeSpec(field=F9, t=1, k=1, lambdas=(u, F9.one, -u), eps1=u, eps2=-F9.one)
    rec = expand_alpha(spec, 9)
    head = [Poly.monomial(F9, 1, c) for c in spec.lambdas]
    assert rec.quotients[:3] == head
    assert rec.quotients[0].degree() == 1
    assert rec.verify_determinants()
    short = expand_alpha(spec, 3)
    assert short.quotients == head


def test_expansion_deterministic():
    spec = corollary_spec()
    a = expand_alpha(spec, 8)
    b = expand_alpha(spec, 8)
    assert a.quotients == b.quotients
    assert a.to_json_dict() == b.to_json_dict()


def test_functional_equation_from_record():
    spec = corollary_spec()
    F, r, l = spec.field, spec.r, spec.l
    rec = expand_alpha(spec, 14)
    alpha = deep_alpha(spec, -260)
    tail = contfrac.predicted_record(F, rec.quotients[l:])
    xm, ym = tail.convergent(len(tail))
    approx = LaurentSeries.from_rational(xm, ym, floor=-(2 * ym.degree() - 1))
    Pk, Qk = _seed_polys(spec)
    res = (
        alpha.frobenius_pow(r)
        - LaurentSeries.from_poly(Pk.scaled(spec.eps1)) * approx
        - LaurentSeries.from_poly(Qk.scaled(spec.eps2))
    )
    assert not res.known_nonzero()


def test_check_root_accepts_iterate():
    spec = corollary_spec()
    alpha = deep_alpha(spec, -300)
    assert alpha.floor <= -300
    result = check_root(spec, alpha)
    assert result.ok
    assert result.leading_exponent is None


def test_check_root_rejects_mutation():
    spec = corollary_spec()
    F = spec.field
    alpha = deep_alpha(spec, -120)
    bad = alpha + LaurentSeries.monomial(F, -37, F.u)
    result = check_root(spec, bad)
    assert not result.ok
    assert result.leading_exponent is not None


def test_check_root_rejects_plain_t():
    spec = corollary_spec()
    F = spec.field
    t_series = LaurentSeries.from_poly(Poly.monomial(F, 1))
    assert not check_root(spec, t_series).ok


def test_bigger_frobenius_power():
    # r = 9 over the prime field, top admissible level
    F = make_field(3, 1)
    spec = TypeSpec(
        field=F, t=2, k=4, lambdas=(F.one, F.from_int(2)), eps1=F.one, eps2=F.one
    )
    rec = expand_alpha(spec, 6)
    assert len(rec) == 6
    assert rec.quotients[0] == Poly.monomial(F, 1)
    assert rec.verify_determinants()
    alpha = deep_alpha(spec, -150)
    assert check_root(spec, alpha).ok
