"""Excursion coupling: pair consecutive crossings of the signed CDF per level.

For a level ``h > 0`` with crossings ``x1 < x2 < ... < xN`` the pairs are
``(x1, x2), (x3, x4), ...``; for ``h < 0`` they are ``(x2, x1), (x4, x3), ...``.
Each pair carries the Lebesgue measure of its band, and the common mass
``mu ^ nu`` stays in place.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, InvariantError
from .measure import Measure, common_mass_split, quantile_pieces
from .signed_graph import (
    Band,
    Crossing,
    Direction,
    IndicatrixProfile,
    build_sigma,
    indicatrix,
    signed_cdf,
)

__all__ = [
    "Affine",
    "Route",
    "Curve",
    "TransportPlan",
    "GammaPair",
    "ExcursionSet",
    "build_gamma",
    "excursion_coupling",
    "identity_plan",
    "RandomDescription",
    "plan_of_random_description",
]


class Affine(NamedTuple):
    slope: Fraction
    intercept: Fraction

    def __call__(self, h):
        return self.slope * h + self.intercept


class Route(NamedTuple):
    x: Fraction
    y: Fraction
    mass: Fraction


class Curve(NamedTuple):
    """Lebesgue measure on ``]h0, h1[`` pushed through ``h -> (x(h), y(h))``."""

    h0: Fraction
    h1: Fraction
    x: Affine
    y: Affine

    @property
    def mass(self) -> Fraction:
        return self.h1 - self.h0


def _canonical_routes(routes) -> tuple[Route, ...]:
    merged: dict[tuple[Fraction, Fraction], Fraction] = {}
    for x, y, m in routes:
        x, y, m = Fraction(x), Fraction(y), Fraction(m)
        if m < 0:
            raise DomainError(f"negative route mass {m}")
        merged[(x, y)] = merged.get((x, y), Fraction(0)) + m
    return tuple(Route(x, y, m) for (x, y), m in sorted(merged.items()) if m)


def _canonical_curves(curves) -> tuple[Curve, ...]:
    items = []
    for h0, h1, xa, ya in curves:
        h0, h1 = Fraction(h0), Fraction(h1)
        if h1 < h0:
            raise DomainError("curve band must have h0 <= h1")
        if h1 > h0:
            items.append(Curve(h0, h1, Affine(*map(Fraction, xa)), Affine(*map(Fraction, ya))))
    items.sort()
    out: list[Curve] = []
    for c in items:
        # join contiguous bands carrying the same parametrized route
        for k, prev in enumerate(out):
            if prev.h1 == c.h0 and prev.x == c.x and prev.y == c.y:
                out[k] = prev._replace(h1=c.h1)
                break
        else:
            out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class TransportPlan:
    """Atomic routes plus curve components, in canonical order.

    Duplicate routes are merged and zero masses dropped, so ``==`` on two
    atomic plans is exact equality of measures on the plane.
    """

    routes: tuple[Route, ...] = ()
    curves: tuple[Curve, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "routes", _canonical_routes(self.routes))
        object.__setattr__(self, "curves", _canonical_curves(self.curves))

    @property
    def is_atomic(self) -> bool:
        return not self.curves

    @property
    def total_mass(self) -> Fraction:
        return sum((r.mass for r in self.routes), Fraction(0)) + sum(
            (c.mass for c in self.curves), Fraction(0)
        )

    def __add__(self, other: "TransportPlan") -> "TransportPlan":
        return TransportPlan(self.routes + other.routes, self.curves + other.curves)

    def scaled(self, c) -> "TransportPlan":
        c = Fraction(c)
        return TransportPlan(
            [(r.x, r.y, r.mass * c) for r in self.routes],
            [
                (cv.h0 * c, cv.h1 * c, Affine(cv.x.slope / c, cv.x.intercept), Affine(cv.y.slope / c, cv.y.intercept))
                for cv in self.curves
            ]
            if c
            else [],
        )

    def route_mass(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        for r in self.routes:
            if r.x == x and r.y == y:
                return r.mass
        return Fraction(0)


def identity_plan(m: Measure) -> TransportPlan:
    """``(id x id)`` pushed forward by ``m``; uniform parts become diagonal
    curves parametrized by cumulative mass."""
    routes = [(a.x, a.x, a.w) for a in m.atoms]
    curves = []
    for q in quantile_pieces(Measure(uniforms=m.uniforms)):
        line = Affine(q.slope, q.intercept)
        curves.append((q.lo, q.hi, line, line))
    return TransportPlan(routes, curves)


class GammaPair(NamedTuple):
    source: Crossing
    target: Crossing

    @property
    def band(self) -> tuple[Fraction, Fraction]:
        return self.source.lo, self.source.hi


@dataclass(frozen=True)
class ExcursionSet:
    """Pairs of crossings per band, sources on Up crossings, targets on Down."""

    bands: tuple[tuple[Band, tuple[GammaPair, ...]], ...] = field(default_factory=tuple)

    @property
    def pairs(self) -> list[GammaPair]:
        return [p for _, pairs in self.bands for p in pairs]


def build_gamma(profile: IndicatrixProfile) -> ExcursionSet:
    profile.check()
    out = []
    for band in profile.bands:
        cs = band.crossings
        if len(cs) % 2:
            raise InvariantError(f"odd number of crossings in band ({band.lo}, {band.hi})")
        if band.positive:
            pairs = tuple(GammaPair(cs[k], cs[k + 1]) for k in range(0, len(cs), 2))
        else:
            pairs = tuple(GammaPair(cs[k + 1], cs[k]) for k in range(0, len(cs), 2))
        for p in pairs:
            if p.source.direction is not Direction.UP or p.target.direction is not Direction.DOWN:
                raise InvariantError("excursion pair does not go from an up to a down crossing")
        out.append((band, pairs))
    return ExcursionSet(tuple(out))


def _plan_from_gamma(gamma: ExcursionSet) -> TransportPlan:
    routes, curves = [], []
    for pair in gamma.pairs:
        src, dst = pair.source, pair.target
        if src.is_fixed and dst.is_fixed:
            routes.append((src.intercept, dst.intercept, src.hi - src.lo))
        else:
            curves.append(
                (src.lo, src.hi, Affine(src.slope, src.intercept), Affine(dst.slope, dst.intercept))
            )
    return TransportPlan(routes, curves)


def excursion_coupling(mu: Measure, nu: Measure) -> TransportPlan:
    """The excursion coupling of two measures of equal mass.

    >>> from excursion_ot.measure import Measure
    >>> plan = excursion_coupling(Measure(atoms=[(0, "1/2"), (5, "1/2")]),
    ...                           Measure(atoms=[(4, "1/2"), (9, "1/2")]))
    >>> [(str(r.x), str(r.y), str(r.mass)) for r in plan.routes]
    [('0', '4', '1/2'), ('5', '9', '1/2')]
    """
    if mu.total_mass != nu.total_mass:
        raise DomainError(f"mass mismatch: {mu.total_mass} vs {nu.total_mass}")
    split = common_mass_split(mu, nu)
    gamma = build_gamma(indicatrix(build_sigma(split)))
    return identity_plan(split.eta) + _plan_from_gamma(gamma)


@dataclass(frozen=True)
class RandomDescription:
    """Masses implied by the randomized construction (draw a level, then a pair).

    ``table`` rows are ``(h_lo, h_hi, source, target, mass)`` with the
    crossing locations given at the band midpoint.
    """

    table: tuple[tuple[Fraction, Fraction, Fraction, Fraction, Fraction], ...]
    theta_half_total: Fraction
    plan: TransportPlan
    ok: bool


def plan_of_random_description(mu: Measure, nu: Measure) -> RandomDescription:
    """Recompute pair masses the way the randomized construction would.

    The moving part is normalized to a probability, a level ``H`` is drawn with
    density ``i(h)/2`` and one of the ``i(h)/2`` pairs is picked uniformly; the
    resulting law is scaled back by the moving mass and compared with
    :func:`excursion_coupling`.
    """
    split = common_mass_split(mu, nu)
    moving = split.mu0.total_mass
    table = []
    plan = identity_plan(split.eta)
    theta_half = Fraction(0)
    if moving:
        # normalized measures: levels scale by 1/moving
        profile = indicatrix(signed_cdf(split.mu0.scaled(1 / moving), split.nu0.scaled(1 / moving)))
        theta_half = sum((b.length * len(b.crossings) / 2 for b in profile.bands), Fraction(0))
        if theta_half == 0:
            raise InvariantError("moving mass with no crossings")
        gamma = build_gamma(profile)
        routes, curves = [], []
        for band, pairs in gamma.bands:
            p_band = band.length * len(band.crossings) / 2 / theta_half
            each = moving * p_band / len(pairs)
            mid = (band.lo + band.hi) / 2
            for pair in pairs:
                table.append((band.lo * moving, band.hi * moving, pair.source.x_at(mid), pair.target.x_at(mid), each))
                src, dst = pair.source, pair.target
                if src.is_fixed and dst.is_fixed:
                    routes.append((src.intercept, dst.intercept, each))
                else:
                    # rescale the level variable back to the unnormalized axis
                    curves.append(
                        (
                            band.lo * moving,
                            band.lo * moving + each,
                            Affine(src.slope / moving, src.intercept),
                            Affine(dst.slope / moving, dst.intercept),
                        )
                    )
        plan = plan + TransportPlan(routes, curves)
    ok = plan == excursion_coupling(mu, nu)
    return RandomDescription(tuple(table), theta_half, plan, ok)
