"""Exact transportation solves between atomic measures.

``solve_lp`` returns an optimal vertex with its dual certificate.
``solve_secondary`` minimizes ``T_q`` over the ``T_1``-optimal face, found as
the plans supported on the tight edges of an exact ``p = 1`` dual (any optimal
dual works: by complementary slackness every optimal plan lives on its tight
edges, and every feasible plan on them attains the dual bound).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .excursion import TransportPlan
from .measure import Measure
from .plan import CostSpec, pair_cost
from .simplex import Cell, transport_simplex

__all__ = [
    "SolveReport",
    "SweepResult",
    "solve_lp",
    "optimal_face_edges",
    "solve_secondary",
    "sweep_p",
    "MAX_CELLS",
    "TOL",
]

MAX_CELLS = 10**6
TOL = 1e-9


@dataclass(frozen=True)
class SolveReport:
    plan: TransportPlan
    value: Fraction | float
    duals: tuple[tuple, tuple]
    tight_edges: frozenset[Cell]
    iterations: int
    exact: bool
    basis: tuple[Cell, ...]
    sources: tuple[Fraction, ...]
    targets: tuple[Fraction, ...]
    cost: CostSpec


def _check_atomic(mu: Measure, nu: Measure) -> None:
    if not (mu.is_atomic and nu.is_atomic):
        raise DomainError("the solver only accepts purely atomic measures; discretize first")
    if mu.total_mass != nu.total_mass:
        raise DomainError(f"mass mismatch: {mu.total_mass} vs {nu.total_mass}")
    if mu.is_zero:
        raise DomainError("zero measures have nothing to transport")
    if len(mu.atoms) * len(nu.atoms) > MAX_CELLS:
        raise DomainError(f"{len(mu.atoms)} x {len(nu.atoms)} cells exceeds the cap {MAX_CELLS}")


def cost_matrix(xs: Sequence[Fraction], ys: Sequence[Fraction], c: CostSpec) -> list[list]:
    return [[pair_cost(x, y, c) for y in ys] for x in xs]


def _tight(cost, u, v, cells, exact: bool) -> frozenset[Cell]:
    if exact:
        return frozenset((i, j) for i, j in cells if cost[i][j] == u[i] + v[j])
    return frozenset(
        (i, j) for i, j in cells if abs(cost[i][j] - u[i] - v[j]) <= TOL * max(1.0, abs(cost[i][j]))
    )


def _report(result, cost, xs, ys, c: CostSpec, cells) -> SolveReport:
    exact = c.is_exact
    flows = result.flows
    plan = TransportPlan([(xs[i], ys[j], f) for (i, j), f in flows.items()])
    if exact:
        value = sum((f * cost[i][j] for (i, j), f in flows.items()), Fraction(0))
    else:
        value = math.fsum(float(f) * cost[i][j] for (i, j), f in flows.items())
    return SolveReport(
        plan=plan,
        value=value,
        duals=(tuple(result.u), tuple(result.v)),
        tight_edges=_tight(cost, result.u, result.v, cells, exact),
        iterations=result.iterations,
        exact=exact,
        basis=tuple(sorted(result.basis)),
        sources=tuple(xs),
        targets=tuple(ys),
        cost=c,
    )


def solve_lp(mu: Measure, nu: Measure, c: CostSpec) -> SolveReport:
    """Optimal vertex plan for ``T_c`` between two atomic measures.

    >>> from excursion_ot.measure import Measure
    >>> r = solve_lp(Measure.dirac(0), Measure.dirac(1), CostSpec(0.5))
    >>> r.value
    1.0
    """
    _check_atomic(mu, nu)
    xs = [a.x for a in mu.atoms]
    ys = [b.x for b in nu.atoms]
    cost = cost_matrix(xs, ys, c)
    result = transport_simplex(
        [a.w for a in mu.atoms], [b.w for b in nu.atoms], cost, exact=c.is_exact, tol=TOL
    )
    cells = [(i, j) for i in range(len(xs)) for j in range(len(ys))]
    return _report(result, cost, xs, ys, c, cells)


def optimal_face_edges(report: SolveReport) -> frozenset[Cell]:
    """Tight edges of an exact ``p = 1`` report: the support set of the optimal face."""
    if not report.exact or report.cost.p != 1:
        raise DomainError("optimal face edges need an exact p = 1 report")
    return report.tight_edges


def solve_secondary(mu: Measure, nu: Measure, q: float) -> SolveReport:
    """Minimize ``T_q`` among ``T_1``-optimal plans.

    The restricted simplex is warm-started from the ``p = 1`` optimal basis,
    whose cells are tight, so no phase one is needed.
    """
    if not 0 < q < 1:
        raise DomainError(f"secondary exponent must lie in ]0, 1[, got {q}")
    first = solve_lp(mu, nu, CostSpec(1))
    edges = optimal_face_edges(first)
    c = CostSpec(q)
    cost = cost_matrix(first.sources, first.targets, c)
    xs, ys = first.sources, first.targets
    flows = {}
    for i, j in first.basis:
        flows[(i, j)] = first.plan.route_mass(xs[i], ys[j])
    result = transport_simplex(
        [a.w for a in mu.atoms],
        [b.w for b in nu.atoms],
        cost,
        allowed=sorted(edges),
        basis=first.basis,
        flows=flows,
        exact=c.is_exact,
        tol=TOL,
    )
    return _report(result, cost, xs, ys, c, sorted(edges))


@dataclass(frozen=True)
class SweepResult:
    reports: tuple[tuple[float, SolveReport], ...]
    stable_from: int

    @property
    def final_plan(self) -> TransportPlan:
        return self.reports[-1][1].plan


def _validate_schedule(schedule: Sequence[float]) -> list[float]:
    out = [float(p) for p in schedule]
    if not out:
        raise DomainError("empty schedule")
    if any(not 0 < p < 1 for p in out):
        raise DomainError("schedule entries must lie in ]0, 1[")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise DomainError("schedule must be strictly increasing")
    return out


def _solve_at(args) -> SolveReport:
    mu, nu, p = args
    return solve_lp(mu, nu, CostSpec(p))


def sweep_p(mu: Measure, nu: Measure, schedule: Sequence[float], workers: int = 1) -> SweepResult:
    """Solve at each ``p`` of an increasing schedule below 1.

    ``stable_from`` is the first index from which every plan equals the last.
    """
    ps = _validate_schedule(schedule)
    _check_atomic(mu, nu)
    jobs = [(mu, nu, p) for p in ps]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            reports = list(pool.map(_solve_at, jobs))
    else:
        reports = [_solve_at(j) for j in jobs]
    stable = len(reports) - 1
    while stable > 0 and reports[stable - 1].plan == reports[-1].plan:
        stable -= 1
    return SweepResult(tuple(zip(ps, reports)), stable)
