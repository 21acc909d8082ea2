"""Arch predicates on transport routes.

A route ``(x, y)`` is drawn as an arch over ``[min(x, y), max(x, y)]``.  A
route set is monotone when no two arches cross, no arch ends where another
nondegenerate one starts, and nested arches point the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .excursion import TransportPlan

__all__ = ["PairVerdict", "ArchVerdict", "check_pair", "check_plan", "CURVE_SAMPLES"]

CURVE_SAMPLES = 16

RoutePair = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class PairVerdict(NamedTuple):
    non_crossing: bool
    non_connecting: bool
    orientation_ok: bool

    @property
    def ok(self) -> bool:
        return self.non_crossing and self.non_connecting and self.orientation_ok


def _strictly_inside(inner, outer) -> bool:
    return outer[0] < inner[0] and inner[1] < outer[1]


def check_pair(r1, r2) -> PairVerdict:
    """Evaluate the three arch predicates on two routes, exactly.

    >>> check_pair((0, 9), (5, 4))
    PairVerdict(non_crossing=True, non_connecting=True, orientation_ok=False)
    """
    (x, y), (x2, y2) = r1, r2
    i1 = (min(x, y), max(x, y))
    i2 = (min(x2, y2), max(x2, y2))
    lo, hi = max(i1[0], i2[0]), min(i1[1], i2[1])
    nested = (i1[0] <= i2[0] and i2[1] <= i1[1]) or (i2[0] <= i1[0] and i1[1] <= i2[1])
    non_crossing = lo >= hi or nested
    degenerate = min(abs(y - x), abs(y2 - x2)) == 0
    non_connecting = degenerate or not (y == x2 or y2 == x)
    opposite = (y - x) * (y2 - x2) < 0
    orientation_ok = not (opposite and (_strictly_inside(i2, i1) or _strictly_inside(i1, i2)))
    return PairVerdict(non_crossing, non_connecting, orientation_ok)


@dataclass
class ArchVerdict:
    crossing_violations: list[RoutePair] = field(default_factory=list)
    connection_violations: list[RoutePair] = field(default_factory=list)
    orientation_violations: list[RoutePair] = field(default_factory=list)
    sampled: bool = False

    @property
    def clean(self) -> bool:
        return not (self.crossing_violations or self.connection_violations or self.orientation_violations)

    def summary(self) -> str:
        if not self.clean:
            return "violations"
        return "clean (sampled)" if self.sampled else "clean"


def _sample_routes(plan: TransportPlan) -> list[tuple[Fraction, Fraction]]:
    # interior levels only: band endpoints carry no mass
    out = []
    for cv in plan.curves:
        step = cv.mass / CURVE_SAMPLES
        for k in range(CURVE_SAMPLES):
            h = cv.h0 + step * (2 * k + 1) / 2
            out.append((cv.x(h), cv.y(h)))
    return out


def check_plan(plan: TransportPlan) -> ArchVerdict:
    """Pairwise check over the positive-mass routes plus sampled curve levels.

    Any violation reported is a real one at exact sampled coordinates; a clean
    verdict on a plan with curves is only as strong as the sampling.
    """
    routes = list(dict.fromkeys([(r.x, r.y) for r in plan.routes] + _sample_routes(plan)))
    verdict = ArchVerdict(sampled=bool(plan.curves))
    for k, r1 in enumerate(routes):
        for r2 in routes[k + 1 :]:
            v = check_pair(r1, r2)
            if not v.non_crossing:
                verdict.crossing_violations.append((r1, r2))
            if not v.non_connecting:
                verdict.connection_violations.append((r1, r2))
            if not v.orientation_ok:
                verdict.orientation_violations.append((r1, r2))
    return verdict
