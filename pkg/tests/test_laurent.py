import random

import pytest

from hyperquad.ffield import f27_preset, frobenius, make_field
from hyperquad.fpoly import Poly
from hyperquad.laurent import LaurentSeries, PrecisionError, format_series

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F27 = f27_preset()


def P(field, *coeffs):
    return Poly(field, [field.from_int(c) if isinstance(c, int) else c for c in coeffs])


def random_series(field, rng, top_lo=-3, top_hi=5, depth_lo=3, depth_hi=12, exact=False):
    top = rng.randint(top_lo, top_hi)
    depth = rng.randint(depth_lo, depth_hi)
    pool = list(field.elements())
    rows = [rng.choice(pool).coeffs for _ in range(depth)]
    floor = None if exact else top - depth
    s = LaurentSeries.make(field, top, rows, floor)
    return s


def test_geometric_series():
    inv = LaurentSeries.from_rational(Poly.one(F3), P(F3, -1, 1), floor=-6)
    # 1/(T-1) = T^-1 + T^-2 + ... over F_3
    for e in range(-1, -6, -1):
        assert inv.coefficient(e) == F3.one
    assert inv.top == -1
    assert inv.floor == -6


def test_product_with_inverse_is_one():
    b = LaurentSeries.from_poly(P(F3, -1, 0, 1))
    binv = b.inverse(floor=-12)
    prod = b * binv
    assert prod.coefficient(0) == F3.one
    for e in range(prod.top, max(prod.floor + 1, -9), -1):
        expected = F3.one if e == 0 else F3.zero
        assert prod.coefficient(e) == expected


def test_absolute_value_exponent():
    a = LaurentSeries.make(F3, 2, [(1,), (0,), (2,)], -4)
    assert a.top == 2


def test_add_floor_is_max():
    a = LaurentSeries.make(F3, 3, [(1,)] * 8, -5)
    b = LaurentSeries.make(F3, 1, [(2,)] * 9, -8)
    assert (a + b).floor == -5
    assert (a - b).floor == -5


def test_mul_floor_propagation():
    a = LaurentSeries.make(F3, 2, [(1,)] * 7, -5)
    b = LaurentSeries.make(F3, 3, [(1,)] * 8, -5)
    prod = a * b
    assert prod.floor == max(-5 + 3, -5 + 2)


def test_ultrametric_random():
    rng = random.Random(7)
    for _ in range(60):
        a = random_series(F5, rng)
        b = random_series(F5, rng)
        c = a + b
        if not c.known_nonzero():
            continue
        assert c.top <= max(a.top, b.top)
        if a.top != b.top:
            assert c.top == max(a.top, b.top)


def test_zero_states_distinct():
    exact = LaurentSeries.zero(F3)
    fuzzy = LaurentSeries.zero(F3, floor=-4)
    assert exact.is_exact_zero()
    assert fuzzy.is_zero_at_precision()
    assert not fuzzy.is_exact_zero()
    with pytest.raises(ZeroDivisionError):
        LaurentSeries.from_poly(Poly.one(F3)) / exact
    with pytest.raises(PrecisionError):
        LaurentSeries.from_poly(Poly.one(F3)) / fuzzy


def test_cancellation_loses_leading_terms():
    a = LaurentSeries.make(F3, 2, [(1,), (1,)], -3)
    b = LaurentSeries.make(F3, 2, [(1,), (2,)], -3)
    d = a - b
    assert d.top == 1
    full = a - a
    assert full.is_zero_at_precision()
    assert full.floor == -3


def test_frobenius_pow_examples():
    a = LaurentSeries.make(F3, 1, [(1,), (0,), (1,)], None)  # T + T^-1, exact
    cube = a.frobenius_pow(3)
    assert cube.coefficient(3) == F3.one
    assert cube.coefficient(-3) == F3.one
    for e in (2, 1, 0, -1, -2):
        assert cube.coefficient(e) == F3.zero
    c = LaurentSeries.from_poly(P(F3, 2))
    assert c.frobenius_pow(3).coefficient(0) == F3.from_int(2)


def test_frobenius_pow_floor_scaling():
    a = LaurentSeries.make(F3, 0, [(1,)] * 5, -5)
    assert a.frobenius_pow(3).floor == -15
    with pytest.raises(ValueError):
        a.frobenius_pow(5)
    with pytest.raises(ValueError):
        a.frobenius_pow(1)


@pytest.mark.parametrize("field,r", [(F3, 3), (F3, 9), (F5, 5)])
def test_frobenius_matches_repeated_multiplication(field, r):
    rng = random.Random(100 + r)
    for _ in range(20):
        a = random_series(field, rng)
        direct = a.frobenius_pow(r)
        power = a
        for _ in range(r - 1):
            power = power * a
        assert direct.agrees_with(power)


def test_frobenius_on_extension_field():
    rng = random.Random(5)
    for _ in range(10):
        a = random_series(F27, rng)
        cube = a.frobenius_pow(3)
        for e, c in a.known_coefficients():
            if 3 * e > cube.floor:
                assert cube.coefficient(3 * e) == frobenius(c, 1)


def naive_mul(a, b):
    """Schoolbook product via FieldElement arithmetic, for kernel validation."""
    field = a.field
    terms = {}
    for ea, ca in a.known_coefficients():
        for eb, cb in b.known_coefficients():
            e = ea + eb
            terms[e] = terms.get(e, field.zero) + ca * cb
    floors = [f for f in (None if a.floor is None else a.floor + b.top,
                          None if b.floor is None else b.floor + a.top)
              if f is not None]
    floor = max(floors) if floors else None
    out = LaurentSeries.zero(field, floor)
    for e, c in terms.items():
        if floor is not None and e <= floor:
            continue
        out = out + LaurentSeries.monomial(field, e, c)
    return out.truncated(floor) if floor is not None else out


@pytest.mark.parametrize("field", [F3, F27, make_field(5, 2)])
def test_block_multiplication_matches_naive(field):
    rng = random.Random(id(field) % 10000)
    for _ in range(12):
        a = random_series(field, rng)
        b = random_series(field, rng)
        if not (a.known_nonzero() and b.known_nonzero()):
            continue
        prod = a * b
        ref = naive_mul(a, b)
        assert prod.agrees_with(ref)
        assert prod.floor == ref.floor


@pytest.mark.parametrize("field", [F3, F27])
def test_inverse_round_trip(field):
    rng = random.Random(21)
    for _ in range(12):
        a = random_series(field, rng, depth_lo=4)
        if not a.known_nonzero():
            continue
        inv = a.inverse()
        prod = a * inv
        assert prod.coefficient(0) == field.one
        for e in range(-1, prod.floor, -1):
            assert prod.coefficient(e) == field.zero


def test_polynomial_part_examples():
    a = LaurentSeries.make(F3, 2, [(1,), (0,), (1,), (1,)], -2)
    assert a.polynomial_part() == P(F3, 1, 0, 1)
    b = LaurentSeries.make(F3, -1, [(1,), (1,)], -3)
    assert b.polynomial_part().is_zero()
    c = LaurentSeries.from_rational(P(F3, -1, 0, 1), P(F3, 0, 1), floor=-4)
    assert c.polynomial_part() == P(F3, 0, 1)


def test_polynomial_part_needs_constant_term():
    a = LaurentSeries.make(F3, 3, [(1,)] * 3, 0)
    with pytest.raises(PrecisionError):
        a.polynomial_part()
    b = LaurentSeries.make(F3, 3, [(1,)] * 2, 1)
    with pytest.raises(PrecisionError):
        b.polynomial_part()


def test_exact_division():
    a = LaurentSeries.from_poly(P(F3, -1, 0, 1))
    b = LaurentSeries.from_poly(P(F3, 1, 1))
    q = a / b
    assert q.floor is None
    assert q.polynomial_part() == P(F3, -1, 1)
    with pytest.raises(PrecisionError):
        _ = b / a


def test_exact_division_with_shift():
    num = LaurentSeries.from_poly(P(F3, 0, 0, 1, 1))  # T^3 + T^2
    den = LaurentSeries.from_poly(P(F3, 0, 1))  # T
    q = num / den
    assert q.floor is None
    assert q.polynomial_part() == P(F3, 0, 1, 1)


def test_monomial_inverse_stays_exact():
    m = LaurentSeries.monomial(F3, 4, F3.from_int(2))
    inv = m.inverse()
    assert inv.floor is None
    assert inv.top == -4
    assert inv.coefficient(-4) == F3.from_int(2)  # 2 is its own inverse mod 3


def test_truncated_weakens_only():
    a = LaurentSeries.make(F3, 2, [(1,)] * 6, -4)
    t = a.truncated(-2)
    assert t.floor == -2
    with pytest.raises(PrecisionError):
        a.truncated(-9)


def test_format_series():
    a = LaurentSeries.make(F3, 1, [(1,), (0,), (2,)], -2)
    text = format_series(a)
    assert "T" in text and "O(T^-2)" in text
    assert format_series(LaurentSeries.zero(F3)) == "0"
    assert format_series(LaurentSeries.zero(F3, floor=-3)) == "O(T^-3)"


def test_deep_inverse_uses_fft_sizes():
    # long enough to cross the kernel's FFT cutoff
    b = LaurentSeries.from_poly(P(F5, 1, 3, 0, 1))
    inv = b.inverse(floor=-9000)
    prod = (b * inv).truncated(-8990)
    assert prod.coefficient(0) == F5.one
    for e in range(-1, -8990, -1):
        assert prod.coefficient(e) == F5.zero
