"""Seed data for hyperquadratic expansions.

For an odd prime power r = p^t only certain levels k admit the
construction: those k for which the companion constants stay p-integral.
This module enumerates that admissible set, builds the seed polynomial
pair (P, Q) together with its scalar data (v, theta, omega, w, b) over
the prime field, and exposes the two one-parameter function families g
and h used by the predicted-expansion machinery, with their internal
identities checkable as exact polynomial statements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import contfrac
from .exactq import (
    is_prime,
    q_coefficients_rational,
    reduce_mod,
    theta_omega_rational,
    v_sequence_rational,
    vp,
    w_sequence_int,
)
from .ffield import FieldDesc, FieldElement, make_field
from .fpoly import Poly

__all__ = [
    "AdmissibilityError",
    "InternalConsistencyError",
    "UndefinedValueError",
    "SeedPair",
    "admissible_set",
    "build_seedpair",
    "eval_g",
    "eval_h",
    "validate_identities",
]


class AdmissibilityError(ValueError):
    """The requested level is outside the admissible set for p^t."""


class InternalConsistencyError(RuntimeError):
    """A construction invariant that should hold automatically failed.

    Reaching this means the scalar data contradicts itself, which the
    integrality analysis rules out for admissible levels; it is kept as
    a hard error rather than an assert so it survives python -O.
    """


class UndefinedValueError(ArithmeticError):
    """A family function was evaluated where its denominator vanishes."""


def _check_pt(p: int, t: int) -> None:
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")


def admissible_set(p: int, t: int) -> list[int]:
    """All admissible levels below p^t, sorted ascending.

    A level is admissible when it can be written m*p^j + (p^j - 1)/2
    with 1 <= m <= (p-1)/2 and 0 <= j <= t-1.  The set is contained in
    {1, ..., (p^t - 1)/2} and always contains the top value (p^t - 1)/2;
    for t = 1 it is the whole range.
    """
    _check_pt(p, t)
    levels = set()
    for j in range(t):
        pj = p**j
        half = (pj - 1) // 2
        for m in range(1, (p - 1) // 2 + 1):
            levels.add(m * pj + half)
    return sorted(levels)


@dataclass(frozen=True)
class SeedPair:
    """Scalar and polynomial seed data for one (p, t, k), over F_p.

    v has length 2k (entry i-1 holds v_i), w has length 2k (indices 0
    through 2k-1), b has length k, and Pk, Qk live in F_p[T] with
    deg Pk = 2k, deg Qk = 2k - 1.
    """

    p: int
    t: int
    k: int
    field: FieldDesc
    v: tuple[FieldElement, ...]
    theta: FieldElement
    omega: FieldElement
    w: tuple[FieldElement, ...]
    b: tuple[FieldElement, ...]
    Pk: Poly
    Qk: Poly

    def __str__(self):
        return f"SeedPair(p={self.p}, t={self.t}, k={self.k})"


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise InternalConsistencyError(what)


@lru_cache(maxsize=None)
def build_seedpair(p: int, t: int, k: int) -> SeedPair:
    """Construct the seed data for level k over F_p, r = p^t.

    Every scalar is computed first in exact rationals, checked for the
    integrality the theory promises (unit v_i, unit central binomials,
    p-integral b_i), and only then reduced mod p.  The reduced data is
    cross-checked against its defining relations, including the full
    continued fraction expansion of Pk/Qk.  Results are cached: the
    pair is immutable and downstream code rebuilds it freely.
    """
    _check_pt(p, t)
    adm = admissible_set(p, t)
    if k not in adm:
        raise AdmissibilityError(
            f"k={k} is not admissible for p={p}, t={t}; valid levels: {adm}"
        )

    vq = v_sequence_rational(k)
    thetaq, omegaq = theta_omega_rational(k)
    bq = q_coefficients_rational(k)
    wints = w_sequence_int(k)

    # Integrality guaranteed by the admissibility of k; anything else
    # would make the reduction below meaningless.
    for i, x in enumerate(vq, start=1):
        _require(vp(x, p) == 0, f"v_{i} = {x} is not a p-adic unit")
    for i in range(2 * k + 1):
        _require(vp(math.comb(2 * k, i), p) == 0, f"binom(2k,{i}) not a unit")
    for i, x in enumerate(bq):
        _require(vp(x, p) >= 0, f"b_{i} = {x} has a pole at {p}")

    field = make_field(p, 1)
    emb = lambda x: field.from_int(reduce_mod(x, p))
    v = tuple(emb(x) for x in vq)
    theta = emb(thetaq)
    omega = emb(omegaq)
    w = tuple(emb(x) for x in wints)
    b = tuple(emb(x) for x in bq)

    Pk = Poly(field, [-1, 0, 1]) ** k
    coeffs = [field.zero] * (2 * k)
    for i, c in enumerate(b):
        coeffs[2 * i + 1] = c
    Qk = Poly(field, coeffs)

    two_k_theta = field.from_int(2 * k) * theta
    _require(v[0] == field.from_int(2 * k - 1), "v_1 != 2k - 1")
    for i in range(1, 2 * k):
        step = Fraction((2 * k - 2 * i - 1) * (2 * k - 2 * i + 1), i * (2 * k - i))
        _require(v[i] * v[i - 1] == emb(step), f"v step relation fails at i={i}")
    _require(omega == -(two_k_theta ** (-2)), "omega != -(2k theta)^-2")
    for i in range(1, 2 * k + 1):
        expected = v[i - 1] * (omega if i % 2 == 1 else omega.inverse())
        _require(v[2 * k - i] == expected, f"v symmetry fails at i={i}")
    _require(
        Qk.evaluate(field.one) == -two_k_theta.inverse(),
        "Qk(1) != -(2k theta)^-1",
    )
    for i in range(1, 2 * k):
        diff = w[i] - w[i - 1]
        _require(
            diff == field.from_int((-1) ** i * math.comb(2 * k, i))
            and not diff.is_zero(),
            f"w difference fails at i={i}",
        )
    rec = contfrac.expand_rational(Pk, Qk)
    want = [Poly.monomial(field, 1, c) for c in v]
    _require(rec.quotients == want, "Pk/Qk does not expand to [v_1 T, ..., v_2k T]")

    return SeedPair(
        p=p, t=t, k=k, field=field,
        v=v, theta=theta, omega=omega, w=w, b=b, Pk=Pk, Qk=Qk,
    )


# -- the families g and h ---------------------------------------------------
#
# Both families are indexed by 0 <= i <= 2k.  The end members are the
# Moebius maps
#     g_0 = theta + X        g_2k = 1/(theta - X)
#     h_0 = X/(theta + X)    h_2k = X/(theta - X)
# and the middle members are quotients of the linear forms theta + w_i X:
#     g_i = 2k theta v_i (i/(2k-2i+1)) (theta + w_i X)/(theta + w_{i-1} X)
#     h_i = (-1)^i binom(2k,i) theta X /((theta + w_i X)(theta + w_{i-1} X)).


def _mid_g_scalar_q(k: int, i: int) -> Fraction:
    # i/(2k-2i+1) is reduced as an exact fraction first: numerator and
    # denominator share their full power of p, so the quotient is a unit.
    vq = v_sequence_rational(k)
    thetaq, _ = theta_omega_rational(k)
    return 2 * k * thetaq * vq[i - 1] * Fraction(i, 2 * k - 2 * i + 1)


def _embed(field: FieldDesc, c: FieldElement) -> FieldElement:
    if field is c.field:
        return c
    if field.p != c.field.p:
        raise ValueError("cannot move a scalar across characteristics")
    return field.from_int(c.coeffs[0])


def eval_g(pair: SeedPair, i: int, x) -> FieldElement | Fraction:
    """Value of g_i at x, for x a field element or an exact rational.

    Raises UndefinedValueError where the denominator vanishes; the
    caller decides what a pole means (for the predicted sequences it
    means the prediction breaks down, not a programming error).
    """
    k = pair.k
    if not 0 <= i <= 2 * k:
        raise ValueError(f"family index must lie in 0..{2 * k}, got {i}")
    if isinstance(x, (int, Fraction)):
        return _eval_g_exact(k, i, Fraction(x))
    field = x.field
    theta = _embed(field, pair.theta)
    if i == 0:
        return theta + x
    if i == 2 * k:
        den = theta - x
        if den.is_zero():
            raise UndefinedValueError(f"g_{i} has a pole at {x}")
        return den.inverse()
    c = field.from_int(reduce_mod(_mid_g_scalar_q(k, i), pair.p))
    den = theta + _embed(field, pair.w[i - 1]) * x
    if den.is_zero():
        raise UndefinedValueError(f"g_{i} has a pole at {x}")
    return c * (theta + _embed(field, pair.w[i]) * x) / den


def _eval_g_exact(k: int, i: int, x: Fraction) -> Fraction:
    thetaq, _ = theta_omega_rational(k)
    if i == 0:
        return thetaq + x
    if i == 2 * k:
        den = thetaq - x
        if den == 0:
            raise UndefinedValueError(f"g_{i} has a pole at {x}")
        return 1 / den
    w = w_sequence_int(k)
    den = thetaq + w[i - 1] * x
    if den == 0:
        raise UndefinedValueError(f"g_{i} has a pole at {x}")
    return _mid_g_scalar_q(k, i) * (thetaq + w[i] * x) / den


def eval_h(pair: SeedPair, i: int, x) -> FieldElement | Fraction:
    """Value of h_i at x; same conventions as eval_g.  h_i(0) = 0."""
    k = pair.k
    if not 0 <= i <= 2 * k:
        raise ValueError(f"family index must lie in 0..{2 * k}, got {i}")
    if isinstance(x, (int, Fraction)):
        return _eval_h_exact(k, i, Fraction(x))
    field = x.field
    theta = _embed(field, pair.theta)
    if i == 0 or i == 2 * k:
        den = theta + x if i == 0 else theta - x
        if den.is_zero():
            raise UndefinedValueError(f"h_{i} has a pole at {x}")
        return x / den
    c = field.from_int((-1) ** i * math.comb(2 * k, i))
    den = (theta + _embed(field, pair.w[i]) * x) * (
        theta + _embed(field, pair.w[i - 1]) * x
    )
    if den.is_zero():
        raise UndefinedValueError(f"h_{i} has a pole at {x}")
    return c * theta * x / den


def _eval_h_exact(k: int, i: int, x: Fraction) -> Fraction:
    thetaq, _ = theta_omega_rational(k)
    if i == 0 or i == 2 * k:
        den = thetaq + x if i == 0 else thetaq - x
        if den == 0:
            raise UndefinedValueError(f"h_{i} has a pole at {x}")
        return x / den
    w = w_sequence_int(k)
    den = (thetaq + w[i] * x) * (thetaq + w[i - 1] * x)
    if den == 0:
        raise UndefinedValueError(f"h_{i} has a pole at {x}")
    return (-1) ** i * math.comb(2 * k, i) * thetaq * x / den


# -- identity validation ----------------------------------------------------


def _g_fraction(pair: SeedPair, i: int) -> tuple[Poly, Poly]:
    """g_i as a (numerator, denominator) pair in F_p[X]."""
    field, k = pair.field, pair.k
    one = Poly.one(field)
    X = Poly.monomial(field, 1)
    th = Poly.constant(field, pair.theta)
    if i == 0:
        return th + X, one
    if i == 2 * k:
        return one, th - X
    c = field.from_int(reduce_mod(_mid_g_scalar_q(k, i), pair.p))
    num = (th + X.scaled(pair.w[i])).scaled(c)
    den = th + X.scaled(pair.w[i - 1])
    return num, den


def _h_fraction(pair: SeedPair, i: int) -> tuple[Poly, Poly]:
    field, k = pair.field, pair.k
    X = Poly.monomial(field, 1)
    th = Poly.constant(field, pair.theta)
    if i == 0:
        return X, th + X
    if i == 2 * k:
        return X, th - X
    c = field.from_int((-1) ** i * math.comb(2 * k, i)) * pair.theta
    den = (th + X.scaled(pair.w[i])) * (th + X.scaled(pair.w[i - 1]))
    return X.scaled(c), den


def g_fraction(pair: SeedPair, i: int) -> tuple[Poly, Poly]:
    """g_i as a (numerator, denominator) pair of polynomials over F_p."""
    if not 0 <= i <= 2 * pair.k:
        raise ValueError(f"family index must lie in 0..{2 * pair.k}, got {i}")
    return _g_fraction(pair, i)


def h_fraction(pair: SeedPair, i: int) -> tuple[Poly, Poly]:
    """h_i as a (numerator, denominator) pair of polynomials over F_p."""
    if not 0 <= i <= 2 * pair.k:
        raise ValueError(f"family index must lie in 0..{2 * pair.k}, got {i}")
    return _h_fraction(pair, i)


def validate_identities(pair: SeedPair) -> dict[str, bool]:
    """Check the internal identities of the g/h families over F_p.

    Each check clears denominators and compares polynomials exactly, so
    a pass is a proof for this (p, k), not a sampled test.  Returns one
    boolean per named identity; construction bugs show up here as False
    entries rather than exceptions.
    """
    field, k, p = pair.field, pair.k, pair.p
    X = Poly.monomial(field, 1)
    th = Poly.constant(field, pair.theta)
    two_k_theta = field.from_int(2 * k) * pair.theta
    g = [_g_fraction(pair, i) for i in range(2 * k + 1)]
    h = [_h_fraction(pair, i) for i in range(2 * k + 1)]
    report: dict[str, bool] = {}

    ok = True
    for i in range(1, 2 * k + 1):
        expected = pair.v[i - 1] * (pair.omega if i % 2 == 1 else pair.omega.inverse())
        ok = ok and pair.v[2 * k - i] == expected
    report["v_symmetry"] = ok

    ok = True
    for i in range(2 * k):
        gn, gd = g[i]
        gn1, gd1 = g[i + 1]
        rhs_num = gn.scaled(-two_k_theta * pair.v[i]) + gd.scaled(two_k_theta**2)
        ok = ok and gn1 * gn == gd1 * rhs_num
    report["g_recursion"] = ok

    ok = True
    for i in range(1, 2 * k):
        gn, gd = g[i]
        cq = Fraction(2 * k - i, 2 * k - 2 * i - 1) * v_sequence_rational(k)[i]
        c = field.from_int(reduce_mod(cq, p))
        lhs = gd.scaled(two_k_theta) * (th + X.scaled(pair.w[i]))
        rhs = (th + X.scaled(pair.w[i - 1])).scaled(c) * gn
        ok = ok and lhs == rhs
    report["g_reciprocal_form"] = ok

    ok = True
    for i in range(1, 2 * k - 1):
        lhs = (
            field.from_int(2 * k - i) * pair.w[i - 1]
            - field.from_int(2 * k - 2 * i - 1) * pair.w[i]
        )
        ok = ok and lhs == field.from_int(i + 1) * pair.w[i + 1]
    report["w_recurrence"] = ok

    # alternative closed form of the last g member, before simplification
    vlast = pair.v[2 * k - 1]
    c = field.from_int(reduce_mod(v_sequence_rational(k)[2 * k - 1] / (2 * k - 1), p))
    rhs_num = (
        (th - X).scaled(-vlast) + (th + X.scaled(field.from_int(2 * k - 1))).scaled(-c)
    ).scaled(two_k_theta)
    gn, gd = g[2 * k]
    report["g_final_form"] = gn * (th - X) == gd * rhs_num

    report["v_last_value"] = vlast == -(
        field.from_int(2 * k - 1) * (two_k_theta**2).inverse()
    )

    ok = True
    for i in range(1, 2 * k + 1):
        gn, gd = g[i]
        gpn, gpd = g[i - 1]
        hn, hd = h[i]
        hpn, hpd = h[i - 1]
        lhs = (gn * gpn).scaled(pair.omega) * hpd * hn
        ok = ok and lhs == gd * gpd * hpn * hd
    report["gh_product_ratio"] = ok

    gn0, gd0 = g[0]
    hn0, hd0 = h[0]
    gnl, gdl = g[2 * k]
    hnl, hdl = h[2 * k]
    report["gh_boundary"] = (gn0 * hn0 == X * gd0 * hd0) and (
        hnl * gdl == X * gnl * hdl
    )

    return report
