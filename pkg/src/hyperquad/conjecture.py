"""Factor coverage of the iterated h-family orbit over a prime field.

Starting from u_1 = x, each node u spawns the three children h_0(u),
h_1(u), h_2(u) (the k = 1 family, so h_0 = 2x/(2x-1), h_1 = 4x/(1-4x^2)
and h_2 = -2x/(2x+1) up to normalisation).  Every monic irreducible
dividing a numerator or denominator along the way is collected, and
the haul is compared against the full census of irreducibles whose
degree is a power of two.  The inclusion (only power-of-two degrees
show up) is proved; equality is the open question this explorer
probes.  A numeric companion walks the same maps on finite-field
elements, twisted by a Frobenius power, and records element degrees.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .exactq import is_prime
from .ffield import FieldDesc, FieldElement, degree_over_prime, frobenius
from .fpoly import Poly, RationalFunction, factor, irreducibles
from .seedpair import (
    InternalConsistencyError,
    SeedPair,
    UndefinedValueError,
    build_seedpair,
    eval_h,
    h_fraction,
)

__all__ = [
    "OrbitLedger",
    "CoverageRow",
    "CoverageReport",
    "GeneralOrbitTrace",
    "new_ledger",
    "step_orbit",
    "run_conjecture",
    "general_k_orbit",
    "DEFAULT_BUDGET",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_BUDGET = 50_000
DEFAULT_DEGREE_CAP = 4_096


@dataclass
class OrbitLedger:
    """Frontier-only state of the breadth-first orbit walk.

    Only the last generation of rational functions is kept (their
    degrees roughly double per generation, so storing the whole tree
    would sink the explorer); factors live in seen_factors with the
    orbit index that first produced them.
    """

    p: int
    field: FieldDesc
    maps: list[tuple[Poly, Poly]]
    frontier: dict[int, RationalFunction]
    seen_factors: dict[Poly, int]
    dropped: list[tuple[int, str]]
    depth: int
    nodes: int
    budget: int
    degree_cap: int
    truncated: bool


def _record_factors(ledger: OrbitLedger, rf: RationalFunction, index: int) -> None:
    for part in (rf.num, rf.den):
        if part.degree() < 1:
            continue
        for irr, _mult in factor(part).factors:
            ledger.seen_factors.setdefault(irr, index)


def new_ledger(
    p: int,
    seed: RationalFunction | None = None,
    budget: int = DEFAULT_BUDGET,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> OrbitLedger:
    """Fresh ledger holding generation zero (u_1 = x unless overridden)."""
    if not is_prime(p) or p == 2:
        raise ValueError("the orbit lives over an odd prime field")
    pair = build_seedpair(p, 1, 1)
    field = pair.field
    if seed is None:
        seed = RationalFunction(Poly.monomial(field, 1), Poly.one(field))
    elif seed.num.field is not field:
        raise ValueError("seed must be a rational function over F_p")
    ledger = OrbitLedger(
        p=p,
        field=field,
        maps=[h_fraction(pair, i) for i in range(3)],
        frontier={1: seed},
        seen_factors={},
        dropped=[],
        depth=0,
        nodes=1,
        budget=budget,
        degree_cap=degree_cap,
        truncated=False,
    )
    _record_factors(ledger, seed, 1)
    return ledger


def _compose(hnum: Poly, hden: Poly, num: Poly, den: Poly) -> tuple[Poly, Poly]:
    # h(num/den) cleared of denominators: substitute and homogenise by
    # the larger of the two map degrees
    D = max(hnum.degree(), hden.degree())
    field = num.field
    npow = [Poly.one(field)]
    dpow = [Poly.one(field)]
    for _ in range(D):
        npow.append(npow[-1] * num)
        dpow.append(dpow[-1] * den)

    def clear(h: Poly) -> Poly:
        acc = Poly.zero(field)
        for j, c in enumerate(h.coeffs_list()):
            if not c.is_zero():
                acc = acc + (npow[j] * dpow[D - j]).scaled(c)
        return acc

    return clear(hnum), clear(hden)


def step_orbit(ledger: OrbitLedger) -> OrbitLedger:
    """Advance one generation; budget exhaustion leaves depth unchanged.

    Children of frontier node n get orbit indices 3n-1, 3n, 3n+1.  A
    child whose denominator vanishes (pole) or that collapses to a
    constant is logged in `dropped` and spawns nothing; a child beyond
    the degree cap likewise, with the truncation flag raised.
    """
    demand = 3 * len(ledger.frontier)
    if ledger.nodes + demand > ledger.budget:
        ledger.truncated = True
        return ledger
    nxt: dict[int, RationalFunction] = {}
    for n in sorted(ledger.frontier):
        u = ledger.frontier[n]
        for i, (hnum, hden) in enumerate(ledger.maps):
            index = 3 * n - 1 + i
            num, den = _compose(hnum, hden, u.num, u.den)
            if den.is_zero():
                ledger.dropped.append((index, "pole"))
                continue
            rf = RationalFunction(num, den)
            if rf.num.degree() < 1 and rf.den.degree() < 1:
                ledger.dropped.append((index, "constant"))
                continue
            if max(rf.num.degree(), rf.den.degree()) > ledger.degree_cap:
                ledger.dropped.append((index, "degree-cap"))
                ledger.truncated = True
                continue
            _record_factors(ledger, rf, index)
            nxt[index] = rf
            ledger.nodes += 1
    ledger.frontier = nxt
    ledger.depth += 1
    return ledger


@dataclass(frozen=True)
class CoverageRow:
    degree: int
    total: int
    found: int

    @property
    def fraction(self) -> float:
        return self.found / self.total

    def __post_init__(self):
        if not 0 <= self.found <= self.total:
            raise InternalConsistencyError(
                f"found {self.found} of {self.total} irreducibles of degree {self.degree}"
            )


@dataclass(frozen=True)
class CoverageReport:
    p: int
    depth: int
    max_log_degree: int
    rows: tuple[CoverageRow, ...]
    non_power_of_two_degrees: tuple[int, ...]
    truncated: bool
    nodes: int
    factors_found: int

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "depth": self.depth,
            "coverage": [
                {"degree": r.degree, "total": r.total, "found": r.found}
                for r in self.rows
            ],
            "non_power_of_two_degrees": list(self.non_power_of_two_degrees),
            "truncated": self.truncated,
        }


def run_conjecture(
    p: int,
    depth: int,
    max_log_degree: int,
    budget: int = DEFAULT_BUDGET,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> CoverageReport:
    """Walk the orbit `depth` generations and tally factor coverage.

    Raises InternalConsistencyError if any recorded factor has a degree
    that is not a power of two: that direction is proved, so seeing a
    violation means the arithmetic is broken, not the claim.
    """
    if depth < 0 or max_log_degree < 0:
        raise ValueError("depth and max-log-degree must be nonnegative")
    ledger = new_ledger(p, budget=budget, degree_cap=degree_cap)
    for _ in range(depth):
        before = ledger.depth
        ledger = step_orbit(ledger)
        if ledger.depth == before or not ledger.frontier:
            break
    degree_counts = Counter(f.degree() for f in ledger.seen_factors)
    bad = sorted(d for d in degree_counts if d & (d - 1))
    if bad:
        raise InternalConsistencyError(
            f"factors of non-power-of-two degree {bad} recorded; "
            "the proved inclusion rules this out"
        )
    rows = tuple(
        CoverageRow(
            degree=1 << j,
            total=irreducibles(p, 1 << j, "count"),
            found=degree_counts.get(1 << j, 0),
        )
        for j in range(max_log_degree + 1)
    )
    return CoverageReport(
        p=p,
        depth=ledger.depth,
        max_log_degree=max_log_degree,
        rows=rows,
        non_power_of_two_degrees=tuple(bad),
        truncated=ledger.truncated,
        nodes=ledger.nodes,
        factors_found=len(ledger.seen_factors),
    )


# -- numeric companion on finite-field elements ------------------------------


@dataclass(frozen=True)
class GeneralOrbitTrace:
    """Reachable set of the numeric orbit x -> h_i(x^r) with degrees."""

    pair: SeedPair
    depth: int
    seen: dict[FieldElement, int]  # value -> first generation
    degree_counts: dict[int, int]
    poles: tuple[tuple[int, int, FieldElement], ...]  # (generation, i, value)

    @property
    def degrees(self) -> set[int]:
        return set(self.degree_counts)


def general_k_orbit(
    pair: SeedPair, seeds, depth: int
) -> GeneralOrbitTrace:
    """Numeric orbit for any admissible k, deduplicated by value.

    The walk applies every h_i to the r-th power of each frontier
    element and records the degree of each reachable value over the
    prime field; pole hits terminate that branch with a record.  The
    ambient field is taken from the seeds, so constants embed wherever
    the caller works.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    seen: dict[FieldElement, int] = {}
    frontier: list[FieldElement] = []
    for s in seeds:
        if not isinstance(s, FieldElement):
            raise TypeError("seeds must be field elements")
        if s not in seen:
            seen[s] = 0
            frontier.append(s)
    poles: list[tuple[int, int, FieldElement]] = []
    for gen in range(1, depth + 1):
        if not frontier:
            break
        nxt: list[FieldElement] = []
        for x in frontier:
            y = frobenius(x, pair.t)
            for i in range(2 * pair.k + 1):
                try:
                    z = eval_h(pair, i, y)
                except UndefinedValueError:
                    poles.append((gen, i, x))
                    continue
                if z not in seen:
                    seen[z] = gen
                    nxt.append(z)
        frontier = nxt
    degree_counts = dict(Counter(degree_over_prime(v) for v in seen))
    return GeneralOrbitTrace(
        pair=pair,
        depth=depth,
        seen=seen,
        degree_counts=degree_counts,
        poles=tuple(poles),
    )
