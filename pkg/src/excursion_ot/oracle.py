"""Brute-force reference solvers over all vertices of the transportation polytope.

Vertices are generated by leaf peeling: put ``min(a_i, b_j)`` on some live
cell, retire the exhausted row or column, recurse.  Each step adds a cell
that is the last one touching a retired node, so the support stays acyclic
and the result is a vertex; conversely every vertex has a leaf cell, so every
vertex is produced.  Memoizing on the remaining supplies keeps this far below
the spanning-tree count.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import DomainError, OracleAmbiguityError
from .excursion import TransportPlan
from .measure import Measure
from .plan import CostSpec, cost

__all__ = [
    "MAX_ATOMS",
    "enumerate_vertices",
    "enumerate_vertices_by_trees",
    "brute_force_lp",
    "brute_force_lexico",
]

MAX_ATOMS = 5
REL_TOL = 1e-9


def _check(mu: Measure, nu: Measure) -> None:
    if not (mu.is_atomic and nu.is_atomic):
        raise DomainError("brute force needs atomic measures")
    if mu.total_mass != nu.total_mass:
        raise DomainError(f"mass mismatch: {mu.total_mass} vs {nu.total_mass}")
    if len(mu.atoms) > MAX_ATOMS or len(nu.atoms) > MAX_ATOMS:
        raise DomainError(f"brute force is capped at {MAX_ATOMS} atoms per side")


def _peel(a: tuple[int, ...], b: tuple[int, ...]) -> frozenset[frozenset]:
    @lru_cache(maxsize=None)
    def go(a, b):
        rows = [i for i, x in enumerate(a) if x]
        if not rows:
            return frozenset([frozenset()])
        cols = [j for j, y in enumerate(b) if y]
        out = set()
        for i in rows:
            for j in cols:
                f = min(a[i], b[j])
                na = a[:i] + (a[i] - f,) + a[i + 1 :]
                nb = b[:j] + (b[j] - f,) + b[j + 1 :]
                for rest in go(na, nb):
                    out.add(rest | {(i, j, f)})
        return frozenset(out)

    return go(a, b)


@lru_cache(maxsize=4096)
def enumerate_vertices(mu: Measure, nu: Measure) -> tuple[TransportPlan, ...]:
    """All vertex plans of the transportation polytope, sorted canonically."""
    _check(mu, nu)
    ws = [a.w for a in mu.atoms] + [b.w for b in nu.atoms]
    den = math.lcm(*(w.denominator for w in ws))
    a = tuple(int(x.w * den) for x in mu.atoms)
    b = tuple(int(y.w * den) for y in nu.atoms)
    xs = [x.x for x in mu.atoms]
    ys = [y.x for y in nu.atoms]
    plans = {
        TransportPlan([(xs[i], ys[j], Fraction(f, den)) for i, j, f in v]) for v in _peel(a, b)
    }
    return tuple(sorted(plans, key=lambda p: p.routes))


def enumerate_vertices_by_trees(mu: Measure, nu: Measure) -> tuple[TransportPlan, ...]:
    """Same vertex set via spanning trees of ``K_{m,n}`` (slow; cross-check only).

    Each spanning tree determines at most one flow; it is a vertex when that
    flow is nonnegative.
    """
    _check(mu, nu)
    m, n = len(mu.atoms), len(nu.atoms)
    cells = [(i, j) for i in range(m) for j in range(n)]
    plans = set()
    for tree in combinations(cells, m + n - 1):
        flow = _tree_flow(tree, [a.w for a in mu.atoms], [b.w for b in nu.atoms])
        if flow is not None and all(f >= 0 for f in flow.values()):
            plans.add(
                TransportPlan([(mu.atoms[i].x, nu.atoms[j].x, f) for (i, j), f in flow.items()])
            )
    return tuple(sorted(plans, key=lambda p: p.routes))


def _tree_flow(tree, a, b):
    """Unique flow on ``tree`` meeting the margins, or None if not a spanning tree."""
    a, b = list(a), list(b)
    m = len(a)
    left = set(tree)
    flow = {}
    while left:
        deg: dict[int, list] = {}
        for i, j in left:
            deg.setdefault(i, []).append((i, j))
            deg.setdefault(m + j, []).append((i, j))
        leaf = next((node for node in sorted(deg) if len(deg[node]) == 1), None)
        if leaf is None:
            return None  # cycle
        (i, j) = deg[leaf][0]
        f = a[i] if leaf < m else b[j]
        flow[(i, j)] = f
        a[i] -= f
        b[j] -= f
        left.discard((i, j))
    if any(a) or any(b):
        return None
    return flow


def _minimizers(plans, c: CostSpec) -> list[TransportPlan]:
    values = [cost(p, c) for p in plans]
    best = min(values)
    if c.is_exact:
        return [p for p, v in zip(plans, values) if v == best]
    slack = REL_TOL * max(1.0, abs(best))
    return [p for p, v in zip(plans, values) if v <= best + slack]


def brute_force_lp(mu: Measure, nu: Measure, c: CostSpec) -> set[TransportPlan]:
    """Every optimal vertex (exact for rational costs, relative 1e-9 otherwise)."""
    return set(_minimizers(enumerate_vertices(mu, nu), c))


def brute_force_lexico(mu: Measure, nu: Measure, q: float) -> TransportPlan:
    """The ``T_q`` minimizer among exact ``T_1`` minimizers; must be unique."""
    if not 0 < q < 1:
        raise DomainError(f"secondary exponent must lie in ]0, 1[, got {q}")
    face = _minimizers(enumerate_vertices(mu, nu), CostSpec(1))
    best = _minimizers(face, CostSpec(q))
    if len(best) != 1:
        raise OracleAmbiguityError(f"{len(best)} distinct plans tie for the secondary cost")
    return best[0]
