"""Transportation simplex on the bipartite graph, Bland's anti-cycling rule.

Flows are always exact Fractions: pivots only add and subtract flow values,
so the primal iterates are exact even when costs are floats.  Costs and dual
potentials are Fractions when the cost matrix is rational, floats otherwise
(reduced costs then compared against ``tol``).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InvariantError, IterationLimitError

Cell = tuple[int, int]


@dataclass
class SimplexResult:
    flows: dict[Cell, Fraction]
    basis: list[Cell]
    u: list
    v: list
    iterations: int


def northwest_corner(supply: Sequence[Fraction], demand: Sequence[Fraction]) -> tuple[list[Cell], dict[Cell, Fraction]]:
    """Initial spanning-tree basis; degenerate steps keep zero-flow basic cells."""
    a, b = list(supply), list(demand)
    m, n = len(a), len(b)
    basis, flows = [], {}
    i = j = 0
    while i < m and j < n:
        f = min(a[i], b[j])
        basis.append((i, j))
        flows[(i, j)] = f
        a[i] -= f
        b[j] -= f
        if a[i] == 0 and i < m - 1:
            i += 1
        elif b[j] == 0:
            j += 1
        else:
            i += 1
    return basis, flows


def _adjacency(basis: list[Cell], m: int, n: int) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(m + n)]
    for i, j in basis:
        adj[i].append(m + j)
        adj[m + j].append(i)
    return adj


def _potentials(basis, cost, m, n, zero):
    adj = _adjacency(basis, m, n)
    u: list = [None] * m
    v: list = [None] * n
    u[0] = zero
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for other in adj[node]:
            if node < m:
                j = other - m
                if v[j] is None:
                    v[j] = cost[node][j] - u[node]
                    queue.append(other)
            else:
                i = other
                if u[i] is None:
                    u[i] = cost[i][node - m] - v[node - m]
                    queue.append(other)
    if any(x is None for x in u) or any(x is None for x in v):
        raise InvariantError("basis is not a spanning tree")
    return u, v


def _tree_path(basis, m, n, start, goal) -> list[int]:
    adj = _adjacency(basis, m, n)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for other in adj[node]:
            if other not in parent:
                parent[other] = node
                queue.append(other)
    if goal not in parent:
        raise InvariantError("basis is not a spanning tree")
    path = [goal]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def _cell(a: int, b: int, m: int) -> Cell:
    return (a, b - m) if a < m else (b, a - m)


def transport_simplex(
    supply: Sequence[Fraction],
    demand: Sequence[Fraction],
    cost: Sequence[Sequence],
    *,
    allowed: Sequence[Cell] | None = None,
    basis: Sequence[Cell] | None = None,
    flows: dict[Cell, Fraction] | None = None,
    exact: bool = True,
    tol: float = 1e-9,
    max_iter: int | None = None,
) -> SimplexResult:
    """Minimize ``sum c_ij x_ij`` over the transportation polytope.

    ``allowed`` restricts the candidate cells; a feasible ``basis`` (spanning
    tree of allowed cells) with its ``flows`` must then be supplied.
    """
    m, n = len(supply), len(demand)
    if m == 0 or n == 0:
        raise DomainError("empty marginal")
    if sum(supply) != sum(demand):
        raise DomainError("unbalanced transportation problem")
    if basis is None:
        if allowed is not None:
            raise DomainError("a restricted problem needs a feasible starting basis")
        basis, flows = northwest_corner(supply, demand)
    basis = list(basis)
    flows = dict(flows)
    if len(basis) != m + n - 1:
        raise InvariantError(f"basis has {len(basis)} cells, expected {m + n - 1}")
    candidates = sorted(allowed) if allowed is not None else [(i, j) for i in range(m) for j in range(n)]
    zero = Fraction(0) if exact else 0.0
    threshold = 0 if exact else -tol
    if max_iter is None:
        max_iter = 50 * (m + n) * m * n + 100
    iterations = 0
    while True:
        u, v = _potentials(basis, cost, m, n, zero)
        in_basis = set(basis)
        entering = None
        for i, j in candidates:
            if (i, j) not in in_basis and cost[i][j] - u[i] - v[j] < threshold:
                entering = (i, j)
                break
        if entering is None:
            return SimplexResult(flows, basis, u, v, iterations)
        iterations += 1
        if iterations > max_iter:
            raise IterationLimitError(f"transportation simplex exceeded {max_iter} pivots")
        i, j = entering
        path = _tree_path(basis, m, n, i, m + j)
        edges = [_cell(path[k], path[k + 1], m) for k in range(len(path) - 1)]
        minus = edges[0::2]
        plus = edges[1::2]
        theta = min(flows[c] for c in minus)
        leaving = min(c for c in minus if flows[c] == theta)
        for c in minus:
            flows[c] -= theta
        for c in plus:
            flows[c] += theta
        flows[entering] = theta
        del flows[leaving]
        basis.remove(leaving)
        basis.append(entering)
