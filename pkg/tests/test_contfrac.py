import random
from fractions import Fraction

import pytest

from hyperquad import exactq
from hyperquad.contfrac import (
    ExpansionRecord,
    UndefinedBracketError,
    eval_finite_constants,
    expand_rational,
    expand_series,
    predicted_record,
)
from hyperquad.ffield import f27_preset, make_field
from hyperquad.fpoly import QQ, Poly, RationalFunction, format_poly
from hyperquad.laurent import LaurentSeries

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F27 = f27_preset()


def qq_poly(*coeffs):
    return Poly(QQ, coeffs)


def test_expand_rational_eq1_level1():
    rec = expand_rational(qq_poly(-1, 0, 1), qq_poly(0, 1))
    assert [format_poly(q) for q in rec.quotients] == ["T", "-1*T"] or [
        q.coeffs_list() for q in rec.quotients
    ] == [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(-1)]]
    assert rec.verify_determinants()
    assert rec.provenance == "rational"


def test_expand_rational_eq1_level2():
    num = qq_poly(1, 0, -2, 0, 1)  # (T^2-1)^2
    b = exactq.q_coefficients_rational(2)
    den = qq_poly(0, b[0], 0, b[1])  # -T + T^3/3
    rec = expand_rational(num, den)
    v = exactq.v_sequence_rational(2)
    expected = [[Fraction(0), vi] for vi in v]
    assert [q.coeffs_list() for q in rec.quotients] == expected
    assert rec.verify_determinants()


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_expand_rational_general_level(k):
    num = qq_poly(-1, 0, 1) ** k
    b = exactq.q_coefficients_rational(k)
    den_coeffs = [Fraction(0)] * (2 * k)
    for i, bi in enumerate(b):
        den_coeffs[2 * i + 1] = bi
    rec = expand_rational(num, Poly(QQ, den_coeffs))
    v = exactq.v_sequence_rational(k)
    assert len(rec.quotients) == 2 * k
    for q, vi in zip(rec.quotients, v):
        assert q.coeffs_list() == [Fraction(0), vi]
    assert rec.verify_determinants()


def test_expand_rational_polynomial_input():
    p = qq_poly(2, 0, 5)
    rec = expand_rational(p, Poly.one(QQ))
    assert rec.quotients == [p]
    assert rec.confirmed == 1


def test_last_convergent_reproduces_input():
    rng = random.Random(3)
    for field in (F3, F5):
        for _ in range(25):
            num = Poly(field, [rng.randrange(field.p) for _ in range(rng.randint(1, 7))])
            den = Poly(field, [rng.randrange(field.p) for _ in range(rng.randint(1, 7))])
            if den.is_zero() or num.is_zero():
                continue
            rec = expand_rational(num, den)
            x, y = rec.convergent(len(rec))
            assert RationalFunction(x, y) == RationalFunction(num, den)
            assert rec.verify_determinants()


def test_expand_series_matches_rational_mod3():
    alpha = LaurentSeries.from_rational(Poly(F3, [-1, 0, 1]), Poly(F3, [0, 1]), floor=-8)
    rec = expand_series(alpha, 5)
    assert rec.status == "rational"
    assert [format_poly(q) for q in rec.quotients] == ["T", "-T"]


def test_expand_series_empty():
    alpha = LaurentSeries.from_rational(Poly.one(F3), Poly(F3, [-1, 1]), floor=-6)
    rec = expand_series(alpha, 0)
    assert len(rec) == 0
    assert rec.status == "complete"


def test_expand_series_agreement_with_euclid_random():
    rng = random.Random(11)
    for field in (F3, F5):
        for _ in range(30):
            num = Poly(field, [rng.randrange(field.p) for _ in range(rng.randint(1, 6))])
            den = Poly(field, [rng.randrange(field.p) for _ in range(rng.randint(1, 6))])
            if den.is_zero():
                continue
            direct = expand_rational(num, den)
            if num.is_zero():
                continue
            alpha = LaurentSeries.from_rational(num, den, floor=-64)
            rec = expand_series(alpha, len(direct))
            n = min(len(rec), len(direct))
            assert rec.quotients[:n] == direct.quotients[:n]
            # with a floor this deep every small Euclid step is confirmed
            assert n == len(direct)


def test_expand_series_precision_exhaustion():
    alpha = LaurentSeries.make(F3, 1, [(1,), (1,), (2,), (1,)], -3)
    rec = expand_series(alpha, 10)
    assert rec.status == "precision-exhausted"
    assert rec.confirmed == len(rec.quotients)
    assert rec.confirmed < 10
    deep = LaurentSeries.make(F3, 1, [(1,)], 0)
    rec0 = expand_series(deep, 3)
    assert rec0.confirmed == 0
    assert rec0.status == "precision-exhausted"


def test_expand_series_exact_polynomial():
    alpha = LaurentSeries.from_poly(Poly(F3, [1, 2, 1]))
    rec = expand_series(alpha, 4)
    assert rec.status == "rational"
    assert rec.quotients == [Poly(F3, [1, 2, 1])]


def test_degree_accounting():
    rng = random.Random(17)
    num = Poly(F5, [rng.randrange(5) for _ in range(9)] + [1])
    den = Poly(F5, [rng.randrange(5) for _ in range(6)] + [1])
    rec = expand_rational(num, den)
    total = 0
    for i in range(2, len(rec) + 1):
        total += rec.quotients[i - 1].degree()
        assert rec.denominators[i].degree() == total


def test_predicted_record_continuants():
    quotients = [Poly(F3, [0, 1]), Poly(F3, [0, 2]), Poly(F3, [1, 1])]
    rec = predicted_record(F3, quotients)
    assert rec.provenance == "predicted"
    assert rec.verify_determinants()
    assert rec.numerators[1] == quotients[0]
    assert rec.denominators[1] == Poly.one(F3)
    x2 = quotients[1] * rec.numerators[1] + rec.numerators[0]
    assert rec.numerators[2] == x2


def test_eval_finite_constants_basic():
    lam = F27.u ** 5
    assert eval_finite_constants([lam]) == lam
    # [a, b] = a + 1/b
    a, b = F3.from_int(1), F3.from_int(2)
    assert eval_finite_constants([a, b]) == a + b.inverse()


def test_eval_finite_constants_corollary_delta1():
    # level k=1 over the 27-element field: 2k*theta = -1, lambda_1 = 1, eps_2 = u^3
    u = F27.u
    two_k_theta = -F27.one
    lam1_cubed = F27.one
    bracket = eval_finite_constants([lam1_cubed, two_k_theta * (u ** 3).inverse()])
    delta1 = two_k_theta * bracket
    assert delta1 == u ** 4
    assert delta1 == -F27.one + u ** 3


def test_eval_finite_constants_zero_suffix():
    with pytest.raises(UndefinedBracketError):
        eval_finite_constants([F3.one, F3.zero])
    with pytest.raises(UndefinedBracketError):
        # suffix [-1, 1] evaluates to -1 + 1/1 = 0
        eval_finite_constants([F3.one, -F3.one, F3.one])
    # a zero total value is fine when no suffix vanishes
    val = eval_finite_constants([-F3.one, F3.one])
    assert val.is_zero()


def test_tail_shape():
    rec = expand_rational(Poly(F3, [1, 0, 0, 1]), Poly(F3, [2, 1]))
    assert rec.tail_shape_ok()


def test_json_shape():
    rec = expand_rational(Poly(F3, [-1, 0, 1]), Poly(F3, [0, 1]))
    d = rec.to_json_dict()
    assert set(d) == {"quotients", "provenance", "confirmed", "status"}
    assert d["quotients"] == ["T", "-T"]
