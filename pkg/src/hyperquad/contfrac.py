"""Continued-fraction mechanics: quotient extraction, continuants, brackets.

Partial quotients come out exactly as Euclid produces them (leading units and
all); nothing is normalized, because downstream comparisons are
coefficient-exact.  A quotient extracted from a truncated series counts as
confirmed only when the tracked precision provably pins it down: quotient n
is kept iff 2*deg(y_n) < -floor, the classical perturbation threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fpoly import Poly, format_poly
from .laurent import LaurentSeries


class UndefinedBracketError(ArithmeticError):
    """A suffix of a constants bracket evaluated to zero."""


@dataclass
class ExpansionRecord:
    """Quotients a_1..a_N with both continuant families from index 0."""

    field: object
    quotients: list  # of Poly
    numerators: list  # x_0, x_1, ..., x_N
    denominators: list  # y_0, y_1, ..., y_N
    provenance: str  # direct | predicted | rational
    confirmed: int
    status: str  # complete | rational | precision-exhausted

    def __len__(self):
        return len(self.quotients)

    def convergent(self, n: int):
        """(x_n, y_n); n from 0."""
        return self.numerators[n], self.denominators[n]

    def verify_determinants(self) -> bool:
        """x_n*y_(n-1) - x_(n-1)*y_n = (-1)^n at every recorded index."""
        one = Poly.one(self.field)
        for n in range(1, len(self.numerators)):
            det = (
                self.numerators[n] * self.denominators[n - 1]
                - self.numerators[n - 1] * self.denominators[n]
            )
            want = one if n % 2 == 0 else -one
            if det != want:
                return False
        return True

    def tail_shape_ok(self) -> bool:
        """Partial quotients after the first must be non-constant."""
        return all(q.degree() >= 1 for q in self.quotients[1:])

    def to_json_dict(self) -> dict:
        return {
            "quotients": [format_poly(q) for q in self.quotients],
            "provenance": self.provenance,
            "confirmed": self.confirmed,
            "status": self.status,
        }


def _record_builder(field):
    return {
        "quotients": [],
        "numerators": [Poly.one(field)],
        "denominators": [Poly.zero(field)],
    }


def _push_quotient(state, a: Poly):
    xs, ys = state["numerators"], state["denominators"]
    state["quotients"].append(a)
    if len(state["quotients"]) == 1:
        xs.append(a)
        ys.append(Poly.one(a.field))
        return
    xs.append(a * xs[-1] + xs[-2])
    ys.append(a * ys[-1] + ys[-2])


def expand_rational(numer: Poly, denom: Poly) -> ExpansionRecord:
    """Finite Euclid expansion of numer/denom."""
    if denom.is_zero():
        raise ZeroDivisionError("expansion of x/0")
    state = _record_builder(numer.field)
    n, d = numer, denom
    while not d.is_zero():
        q, r = divmod(n, d)
        _push_quotient(state, q)
        n, d = d, r
    return ExpansionRecord(
        field=numer.field,
        provenance="rational",
        confirmed=len(state["quotients"]),
        status="complete",
        **state,
    )


def expand_series(alpha: LaurentSeries, n_max: int) -> ExpansionRecord:
    """Extract up to n_max partial quotients from a truncated series."""
    field = alpha.field
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    state = _record_builder(field)
    if n_max == 0:
        return ExpansionRecord(
            field=field, provenance="direct", confirmed=0, status="complete", **state
        )
    if alpha.is_exact_zero():
        _push_quotient(state, Poly.zero(field))
        return ExpansionRecord(
            field=field, provenance="direct", confirmed=1, status="rational", **state
        )
    if alpha.is_zero_at_precision():
        return ExpansionRecord(
            field=field,
            provenance="direct",
            confirmed=0,
            status="precision-exhausted",
            **state,
        )
    if alpha.floor is None:
        # exact Laurent polynomial: a genuine rational expansion
        low = alpha.top - alpha.block.shape[0] + 1
        num = Poly.from_block(field, alpha.block[::-1])
        if low >= 0:
            num = num.shifted(low)
            den = Poly.one(field)
        else:
            den = Poly.monomial(field, -low)
        rec = expand_rational(num, den)
        produced = len(rec.quotients)
        return ExpansionRecord(
            field=field,
            quotients=rec.quotients[:n_max],
            numerators=rec.numerators[: n_max + 1],
            denominators=rec.denominators[: n_max + 1],
            provenance="direct",
            confirmed=min(produced, n_max),
            status="rational" if produced <= n_max else "complete",
        )
    floor = alpha.floor
    if floor >= 0:
        return ExpansionRecord(
            field=field,
            provenance="direct",
            confirmed=0,
            status="precision-exhausted",
            **state,
        )
    # alpha * T^(-floor): known coefficients as a polynomial (degrees >= 1),
    # denominator T^(-floor); Euclid on this pair is Euclid on the truncation
    m = alpha.block.shape[0]
    nb = np.zeros((alpha.top - floor + 1, field.s), dtype=np.int64)
    nb[alpha.top - floor - m + 1 : alpha.top - floor + 1] = alpha.block[::-1]
    n = Poly.from_block(field, nb)
    d = Poly.monomial(field, -floor)
    terminated = False
    while len(state["quotients"]) < n_max:
        q, r = divmod(n, d)
        _push_quotient(state, q)
        n, d = d, r
        if d.is_zero():
            terminated = True
            break
    produced = len(state["quotients"])
    confirmed = 0
    for i in range(1, produced + 1):
        if 2 * state["denominators"][i].degree() < -floor:
            confirmed = i
        else:
            break
    if confirmed == produced:
        status = "rational" if terminated else "complete"
        keep = produced
    else:
        status = "precision-exhausted"
        keep = confirmed
    return ExpansionRecord(
        field=field,
        quotients=state["quotients"][:keep],
        numerators=state["numerators"][: keep + 1],
        denominators=state["denominators"][: keep + 1],
        provenance="direct",
        confirmed=confirmed,
        status=status,
    )


def predicted_record(field, quotients) -> ExpansionRecord:
    """Assemble a record (with continuants) from externally supplied quotients."""
    state = _record_builder(field)
    for a in quotients:
        _push_quotient(state, a)
    return ExpansionRecord(
        field=field,
        provenance="predicted",
        confirmed=len(state["quotients"]),
        status="complete",
        **state,
    )


def eval_finite_constants(values):
    """[c1,...,cm] = c1 + 1/[c2,...,cm]; UndefinedBracketError on zero suffix."""
    vals = list(values)
    if not vals:
        raise ValueError("empty bracket")
    acc = vals[-1]
    for c in reversed(vals[:-1]):
        if acc.is_zero():
            raise UndefinedBracketError(
                "bracket suffix evaluated to zero; the bracket is undefined"
            )
        acc = c + acc.inverse()
    return acc
