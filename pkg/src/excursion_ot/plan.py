"""Solver-independent plan utilities: costs, classical couplings, marginals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .excursion import Affine, TransportPlan
from .measure import Measure, QuantilePiece, quantile_pieces

__all__ = [
    "CostSpec",
    "ZERO_COST",
    "cost",
    "pair_cost",
    "quantile_coupling",
    "antitone_coupling",
    "product_coupling",
    "marginals",
    "plan_distance",
    "total_variation_distance",
    "kolmogorov_distance",
]

QUAD_TOL = 1e-12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class CostSpec:
    """Power cost ``|y - x|**p``; ``p == 0`` is the indicator of ``x != y``."""

    p: float | Fraction

    def __post_init__(self):
        if self.p < 0 or (isinstance(self.p, float) and not math.isfinite(self.p)):
            raise DomainError(f"cost exponent must be > 0 or ZERO, got {self.p}")

    @property
    def is_zero(self) -> bool:
        return self.p == 0

    @property
    def is_exact(self) -> bool:
        """Rational costs on rational inputs (``p`` in {0, 1})."""
        return self.p in (0, 1)

    def __str__(self):
        return "ZERO" if self.is_zero else f"p={self.p}"


ZERO_COST = CostSpec(0)


def pair_cost(x, y, c: CostSpec):
    """Cost of moving unit mass from ``x`` to ``y``: a Fraction when exact."""
    d = abs(y - x)
    if c.is_zero:
        return Fraction(1) if d else Fraction(0)
    if c.p == 1:
        return Fraction(d)
    return float(d) ** float(c.p)


def _gauss(f, a: float, b: float) -> float:
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def _adaptive(f, a: float, b: float, tol: float, whole: float | None = None, depth: int = 0) -> float:
    if whole is None:
        whole = _gauss(f, a, b)
    m = 0.5 * (a + b)
    left, right = _gauss(f, a, m), _gauss(f, m, b)
    if abs(left + right - whole) < tol or depth >= 60 or b - a < 1e-15 * max(1.0, abs(a)):
        return left + right
    return _adaptive(f, a, m, tol / 2, left, depth + 1) + _adaptive(f, m, b, tol / 2, right, depth + 1)


def _curve_cost(curve, c: CostSpec):
    # |y(h) - x(h)| = |alpha h + beta| on the band
    alpha = curve.y.slope - curve.x.slope
    beta = curve.y.intercept - curve.x.intercept
    if c.is_zero:
        return Fraction(0) if alpha == 0 and beta == 0 else curve.mass
    cuts = [curve.h0, curve.h1]
    if alpha != 0 and curve.h0 < -beta / alpha < curve.h1:
        cuts.insert(1, -beta / alpha)
    if c.p == 1:
        total = Fraction(0)
        for lo, hi in zip(cuts, cuts[1:]):
            total += abs(alpha * (hi * hi - lo * lo) / 2 + beta * (hi - lo))
        return total
    if alpha == 0:
        return float(abs(beta)) ** float(c.p) * float(curve.mass)
    fa, fb, p = float(alpha), float(beta), float(c.p)

    def f(h):
        return np.abs(fa * h + fb) ** p

    return math.fsum(_adaptive(f, float(lo), float(hi), QUAD_TOL) for lo, hi in zip(cuts, cuts[1:]))


def cost(plan: TransportPlan, c: CostSpec):
    """Total cost of ``plan``; exact Fraction when ``c`` is exact, else float.

    Curve components use the closed form for ``p == 1`` and adaptive
    Gauss-Legendre quadrature (absolute tolerance 1e-12) otherwise, after
    splitting the band where ``y(h) - x(h)`` changes sign.
    """
    if c.is_exact:
        total = sum((r.mass * pair_cost(r.x, r.y, c) for r in plan.routes), Fraction(0))
        return total + sum((_curve_cost(cv, c) for cv in plan.curves), Fraction(0))
    terms = [float(r.mass) * pair_cost(r.x, r.y, c) for r in plan.routes]
    terms += [_curve_cost(cv, c) for cv in plan.curves]
    return math.fsum(terms)


def _check_masses(mu: Measure, nu: Measure) -> None:
    if mu.total_mass != nu.total_mass:
        raise DomainError(f"mass mismatch: {mu.total_mass} vs {nu.total_mass}")


def _reversed_pieces(pieces: list[QuantilePiece], mass: Fraction) -> list[QuantilePiece]:
    """Pieces of ``alpha -> G(mass - alpha)``."""
    out = [QuantilePiece(mass - q.hi, mass - q.lo, -q.slope, q.slope * mass + q.intercept) for q in pieces]
    return sorted(out)


def _pair_pieces(ps: list[QuantilePiece], qs: list[QuantilePiece]) -> TransportPlan:
    cuts = sorted({q.lo for q in ps + qs} | {q.hi for q in ps + qs})
    routes, curves = [], []
    i = j = 0
    for lo, hi in zip(cuts, cuts[1:]):
        while ps[i].hi <= lo:
            i += 1
        while qs[j].hi <= lo:
            j += 1
        a, b = ps[i], qs[j]
        if a.slope == 0 and b.slope == 0:
            routes.append((a.intercept, b.intercept, hi - lo))
        else:
            curves.append((lo, hi, Affine(a.slope, a.intercept), Affine(b.slope, b.intercept)))
    return TransportPlan(routes, curves)


def quantile_coupling(mu: Measure, nu: Measure) -> TransportPlan:
    """Comonotone plan: law of ``(G_mu(a), G_nu(a))`` for ``a`` uniform."""
    _check_masses(mu, nu)
    if mu.total_mass == 0:
        return TransportPlan()
    return _pair_pieces(quantile_pieces(mu), quantile_pieces(nu))


def antitone_coupling(mu: Measure, nu: Measure) -> TransportPlan:
    """Decreasing rearrangement: law of ``(G_mu(a), G_nu(M - a))``."""
    _check_masses(mu, nu)
    if mu.total_mass == 0:
        return TransportPlan()
    return _pair_pieces(quantile_pieces(mu), _reversed_pieces(quantile_pieces(nu), nu.total_mass))


def product_coupling(mu: Measure, nu: Measure) -> TransportPlan:
    """``mu x nu / mass`` for atomic marginals."""
    _check_masses(mu, nu)
    if not (mu.is_atomic and nu.is_atomic):
        raise DomainError("product coupling is only built for atomic measures")
    mass = mu.total_mass
    if mass == 0:
        return TransportPlan()
    return TransportPlan([(a.x, b.x, a.w * b.w / mass) for a in mu.atoms for b in nu.atoms])


def _push(line: Affine, h0, h1):
    if line.slope == 0:
        return [(line.intercept, h1 - h0)], []
    a, b = sorted((line(h0), line(h1)))
    return [], [(a, b, h1 - h0)]


def marginals(plan: TransportPlan) -> tuple[Measure, Measure]:
    """Exact pushforwards of ``plan`` by the two coordinate projections."""
    xa = [(r.x, r.mass) for r in plan.routes]
    ya = [(r.y, r.mass) for r in plan.routes]
    xu, yu = [], []
    for cv in plan.curves:
        atoms, pieces = _push(cv.x, cv.h0, cv.h1)
        xa += atoms
        xu += pieces
        atoms, pieces = _push(cv.y, cv.h0, cv.h1)
        ya += atoms
        yu += pieces
    return Measure(atoms=xa, uniforms=xu), Measure(atoms=ya, uniforms=yu)


def total_variation_distance(a: TransportPlan, b: TransportPlan) -> Fraction:
    """Half the l1 distance between route masses (atomic plans)."""
    keys = {(r.x, r.y) for r in a.routes} | {(r.x, r.y) for r in b.routes}
    return sum((abs(a.route_mass(*k) - b.route_mass(*k)) for k in keys), Fraction(0)) / 2


def _plan_cdf(plan: TransportPlan, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """``plan(]-inf, x] x ]-inf, y])`` on the grid ``xs x ys`` (floats)."""
    out = np.zeros((len(xs), len(ys)))
    for r in plan.routes:
        out += float(r.mass) * np.outer(xs >= float(r.x), ys >= float(r.y))
    for cv in plan.curves:
        h0, h1 = float(cv.h0), float(cv.h1)
        lo_x, hi_x = _level_window(cv.x, xs, h0, h1)
        lo_y, hi_y = _level_window(cv.y, ys, h0, h1)
        lo = np.maximum(lo_x[:, None], lo_y[None, :])
        hi = np.minimum(hi_x[:, None], hi_y[None, :])
        out += np.clip(hi - lo, 0.0, None)
    return out


def _level_window(line: Affine, vals: np.ndarray, h0: float, h1: float):
    """Per value ``v``: the level interval ``{h in [h0,h1]: line(h) <= v}``."""
    s, c = float(line.slope), float(line.intercept)
    if s == 0:
        inside = vals >= c
        return np.full(len(vals), h0), np.where(inside, h1, h0)
    cut = (vals - c) / s
    if s > 0:
        return np.full(len(vals), h0), np.clip(cut, h0, h1)
    return np.clip(cut, h0, h1), np.full(len(vals), h1)


def _coords(plan: TransportPlan, axis: int) -> set[float]:
    out = set()
    for r in plan.routes:
        out.add(float(r[axis]))
    for cv in plan.curves:
        line = cv.x if axis == 0 else cv.y
        out.update((float(line(cv.h0)), float(line(cv.h1))))
    return out


def kolmogorov_distance(a: TransportPlan, b: TransportPlan, resolution: int = 20) -> float:
    """Sup distance between the bivariate CDFs of two plans.

    The sup is taken over every route/curve-endpoint coordinate and its left
    limit, approximated at ``2**-resolution`` of the smallest coordinate gap.
    Between those coordinates atomic CDFs are constant and curve CDFs are
    monotone, so that candidate grid attains the sup up to that resolution.
    """
    grids = []
    for axis in (0, 1):
        pts = sorted(_coords(a, axis) | _coords(b, axis))
        gaps = [q - p for p, q in zip(pts, pts[1:])]
        eps = (min(gaps) if gaps else 1.0) * 2.0 ** -resolution
        grids.append(np.array(sorted(set(pts) | {p - eps for p in pts})))
    xs, ys = grids
    return float(np.max(np.abs(_plan_cdf(a, xs, ys) - _plan_cdf(b, xs, ys)), initial=0.0))


def plan_distance(a: TransportPlan, b: TransportPlan) -> float:
    """Distance between two plans with the same marginals.

    Atomic plans: total variation (exact, zero iff equal); marginals must
    agree.  Plans with curve components: :func:`kolmogorov_distance`, which
    metrizes weak convergence, so only the total masses must agree (this is
    how discretized plans are compared with a continuous limit).
    """
    if a.is_atomic and b.is_atomic:
        if marginals(a) != marginals(b):
            raise DomainError("plans have different marginals")
        return float(total_variation_distance(a, b))
    if a.total_mass != b.total_mass:
        raise DomainError(f"plans have different masses: {a.total_mass} vs {b.total_mass}")
    return kolmogorov_distance(a, b)

