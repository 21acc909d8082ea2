"""The signed CDF ``F = F_mu0 - F_nu0``, its generalized graph and level sweep.

``F`` is càdlàg and piecewise affine with finitely many breakpoints.  The
generalized graph fills each jump with a vertical segment, so a level ``h``
is "crossed" at ``x`` when ``h`` lies in ``F*(x) = [F(x-), F(x)]`` (either
order).  Sweeping levels over the finite set of values ``{F(b), F(b-)}``
splits the real line of levels into open bands on which the list of
crossings is combinatorially constant; this replaces every "for almost every
level" statement by an exact finite decomposition.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InvariantError
from .measure import CommonMassSplit, Measure, cdf_at, to_fraction

__all__ = [
    "Direction",
    "SignedCdf",
    "Crossing",
    "Band",
    "IndicatrixProfile",
    "signed_cdf",
    "build_sigma",
    "generalized_solutions",
    "generalized_ivt_witness",
    "indicatrix",
    "total_variation_parts",
    "level_measure",
    "indicatrix_integrals",
]

ZERO = Fraction(0)


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"
    TOUCH = "touch"


@dataclass(frozen=True)
class SignedCdf:
    """Piecewise-affine càdlàg function vanishing outside its breakpoints.

    ``values[k]`` is ``F(points[k])``, ``lefts[k]`` is ``F(points[k]-)`` and
    ``slopes[k]`` is the slope on ``]points[k], points[k+1][`` (the last slope is
    zero).  ``F`` is zero before the first breakpoint and after the last.
    """

    points: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    lefts: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        if self.points:
            if self.lefts[0] != 0 or self.values[-1] != 0 or self.slopes[-1] != 0:
                raise InvariantError("signed CDF must vanish at +-infinity")
            for k in range(len(self.points) - 1):
                gap = self.points[k + 1] - self.points[k]
                if self.values[k] + self.slopes[k] * gap != self.lefts[k + 1]:
                    raise InvariantError("signed CDF pieces do not join")

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values) and all(v == 0 for v in self.lefts)

    def _index(self, x: Fraction) -> int:
        """Index of the last breakpoint ``<= x``, or -1."""
        lo, hi = 0, len(self.points)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.points[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return lo - 1

    def __call__(self, x) -> Fraction:
        x = to_fraction(x)
        k = self._index(x)
        if k < 0:
            return ZERO
        return self.values[k] + self.slopes[k] * (x - self.points[k])

    def left_limit(self, x) -> Fraction:
        x = to_fraction(x)
        k = self._index(x)
        if k >= 0 and self.points[k] == x:
            return self.lefts[k]
        return self(x)

    def hull(self, x) -> tuple[Fraction, Fraction]:
        """``F*(x)`` as a closed interval ``(low, high)``."""
        a, b = self.left_limit(x), self(x)
        return (a, b) if a <= b else (b, a)

    def critical_values(self) -> list[Fraction]:
        return sorted(set(self.values) | set(self.lefts) | {ZERO})


def signed_cdf(mu: Measure, nu: Measure) -> SignedCdf:
    """``F_mu - F_nu`` on the merged breakpoint grid (masses must agree)."""
    if mu.total_mass != nu.total_mass:
        raise DomainError(f"mass mismatch: {mu.total_mass} vs {nu.total_mass}")
    pts = sorted(set(mu.breakpoints()) | set(nu.breakpoints()))
    values, lefts, slopes = [], [], []
    current = ZERO
    for k, x in enumerate(pts):
        if k:
            current += slopes[-1] * (x - pts[k - 1])
        lefts.append(current)
        current += mu.atom_at(x) - nu.atom_at(x)
        values.append(current)
        if k + 1 < len(pts):
            mid = (x + pts[k + 1]) / 2
            slopes.append(mu.density_at(mid) - nu.density_at(mid))
        else:
            slopes.append(ZERO)
    return SignedCdf(tuple(pts), tuple(values), tuple(lefts), tuple(slopes))


def build_sigma(split: CommonMassSplit) -> SignedCdf:
    return signed_cdf(split.mu0, split.nu0)


def _side(f: SignedCdf, k: int, h: Fraction, right: bool) -> int:
    """Sign of ``F - h`` just left (``right=False``) or right of breakpoint k."""
    if right:
        v, s = f.values[k], f.slopes[k]
    else:
        v = f.lefts[k]
        s = f.slopes[k - 1] if k > 0 else ZERO
        s = -s  # moving left
    if v != h:
        return 1 if v > h else -1
    return (s > 0) - (s < 0)


def _label(left: int, right: int) -> Direction:
    if left < 0 < right:
        return Direction.UP
    if right < 0 < left:
        return Direction.DOWN
    return Direction.TOUCH


def generalized_solutions(f: SignedCdf, h) -> list[tuple[Fraction, Direction]]:
    """All ``x`` with ``h`` in ``F*(x)``, increasing, labelled Up/Down/Touch.

    Raises :class:`DomainError` when the solution set is not finite, i.e. when
    ``F`` has a plateau at level ``h`` (this includes ``h == 0`` as soon as
    ``F`` vanishes on a ray, which is always).
    """
    h = to_fraction(h)
    if h == 0:
        raise DomainError("level 0 is a plateau of the signed CDF")
    n = len(f.points)
    out: list[tuple[Fraction, Direction]] = []
    for k in range(n):
        lo, hi = sorted((f.lefts[k], f.values[k]))
        if lo <= h <= hi:
            out.append((f.points[k], _label(_side(f, k, h, False), _side(f, k, h, True))))
        if k + 1 < n:
            s = f.slopes[k]
            if s == 0:
                if f.values[k] == h:
                    raise DomainError(f"level {h} is a plateau of the signed CDF")
                continue
            x = f.points[k] + (h - f.values[k]) / s
            if f.points[k] < x < f.points[k + 1]:
                out.append((x, Direction.UP if s > 0 else Direction.DOWN))
    return out


def generalized_ivt_witness(f: SignedCdf, x0, x1, h) -> Fraction:
    """First ``x`` in ``]x0, x1]`` with ``h`` in ``F*(x)``.

    Requires ``x0 < x1`` and ``F(x0) - h``, ``F(x1) - h`` of opposite strict signs.
    """
    x0, x1, h = to_fraction(x0), to_fraction(x1), to_fraction(h)
    if not x0 < x1 or (f(x0) - h) * (f(x1) - h) >= 0:
        raise DomainError("intermediate value precondition violated")
    start, value = x0, f(x0)
    k = f._index(x0)
    slope = f.slopes[k] if k >= 0 else ZERO
    for j in range(k + 1, len(f.points) + 1):
        end = f.points[j] if j < len(f.points) else None
        stop = x1 if end is None or end > x1 else end
        if slope != 0:
            x = start + (h - value) / slope
            if start < x < stop:
                return x
        if end is None or end > x1:
            break
        lo, hi = f.hull(end)
        if lo <= h <= hi:
            return end
        start, value, slope = end, f.values[j], f.slopes[j]
    if f(x1) == h:
        return x1
    raise InvariantError("no generalized solution found despite sign change")


@dataclass(frozen=True)
class Crossing:
    """A generalized solution followed across a level band.

    Its location is ``x(h) = slope * h + intercept``; ``slope == 0`` is a crossing
    pinned at an atom (a jump of ``F``), otherwise it slides along an affine
    piece of ``F``.
    """

    lo: Fraction
    hi: Fraction
    slope: Fraction
    intercept: Fraction
    direction: Direction

    @property
    def is_fixed(self) -> bool:
        return self.slope == 0

    def x_at(self, h) -> Fraction:
        return self.slope * h + self.intercept


@dataclass(frozen=True)
class Band:
    lo: Fraction
    hi: Fraction
    crossings: tuple[Crossing, ...]

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def count_up(self) -> int:
        return sum(c.direction is Direction.UP for c in self.crossings)

    @property
    def count_down(self) -> int:
        return sum(c.direction is Direction.DOWN for c in self.crossings)

    @property
    def positive(self) -> bool:
        return self.lo >= 0


@dataclass(frozen=True)
class IndicatrixProfile:
    bands: tuple[Band, ...] = field(default_factory=tuple)

    def check(self) -> None:
        """Parity and alternation on every band; raises :class:`InvariantError`."""
        for band in self.bands:
            if band.count_up != band.count_down:
                raise InvariantError(
                    f"band ({band.lo}, {band.hi}): {band.count_up} up vs {band.count_down} down"
                )
            first = Direction.UP if band.positive else Direction.DOWN
            for k, c in enumerate(band.crossings):
                expected = first if k % 2 == 0 else _flip(first)
                if c.direction is not expected:
                    raise InvariantError(f"crossings do not alternate in band ({band.lo}, {band.hi})")


def _flip(d: Direction) -> Direction:
    return Direction.DOWN if d is Direction.UP else Direction.UP


def indicatrix(f: SignedCdf) -> IndicatrixProfile:
    """Band decomposition of the level axis with the crossings of each band."""
    levels = f.critical_values()
    n = len(f.points)
    bands = []
    for lo, hi in zip(levels, levels[1:]):
        h = (lo + hi) / 2
        crossings = []
        for k in range(n):
            jlo, jhi = sorted((f.lefts[k], f.values[k]))
            if jlo < h < jhi:
                d = Direction.UP if f.values[k] > f.lefts[k] else Direction.DOWN
                crossings.append(Crossing(lo, hi, ZERO, f.points[k], d))
            if k + 1 < n and f.slopes[k] != 0:
                s = f.slopes[k]
                x = f.points[k] + (h - f.values[k]) / s
                if f.points[k] < x < f.points[k + 1]:
                    d = Direction.UP if s > 0 else Direction.DOWN
                    crossings.append(Crossing(lo, hi, 1 / s, f.points[k] - f.values[k] / s, d))
        if crossings:
            crossings.sort(key=lambda c: c.x_at(h))
            bands.append(Band(lo, hi, tuple(crossings)))
    profile = IndicatrixProfile(tuple(bands))
    profile.check()
    return profile


def _bound(v):
    if v is None:
        return None
    if isinstance(v, float) and math.isinf(v):
        return None
    return to_fraction(v)


def total_variation_parts(f: SignedCdf, s=None, t=None) -> tuple[Fraction, Fraction, Fraction]:
    """Exact ``(TV, TV+, TV-)`` of ``f`` on ``]s, t]``.

    ``None`` or an infinite float stands for an unbounded end.  Jumps at ``t``
    count, jumps at ``s`` do not.
    """
    s, t = _bound(s), _bound(t)
    if s is not None and t is not None and s > t:
        raise DomainError("need s <= t")
    plus = minus = ZERO

    def add(delta):
        nonlocal plus, minus
        if delta > 0:
            plus += delta
        else:
            minus -= delta

    pts = f.points
    for k, x in enumerate(pts):
        if (s is None or x > s) and (t is None or x <= t):
            add(f.values[k] - f.lefts[k])
        if k + 1 < len(pts):
            a = x if s is None else max(x, s)
            b = pts[k + 1] if t is None else min(pts[k + 1], t)
            if a < b:
                add(f.slopes[k] * (b - a))
    return plus + minus, plus, minus


def level_measure(c: Crossing, s=None, t=None) -> Fraction:
    """Lebesgue measure of the levels of ``c``'s band whose crossing point lies
    in ``]s, t]``."""
    s, t = _bound(s), _bound(t)
    lo, hi = c.lo, c.hi
    if c.is_fixed:
        inside = (s is None or c.intercept > s) and (t is None or c.intercept <= t)
        return hi - lo if inside else ZERO
    # solve s < slope*h + intercept <= t for h; endpoints are measure zero
    bounds = []
    for v in (s, t):
        bounds.append(None if v is None else (v - c.intercept) / c.slope)
    a, b = bounds
    if c.slope < 0:
        a, b = b, a
    if a is not None:
        lo = max(lo, a)
    if b is not None:
        hi = min(hi, b)
    return hi - lo if hi > lo else ZERO


def indicatrix_integrals(profile: IndicatrixProfile, s=None, t=None) -> tuple[Fraction, Fraction]:
    """``(integral of i*+ , integral of i*-)`` restricted to crossings in ``]s, t]``."""
    up = down = ZERO
    for band in profile.bands:
        for c in band.crossings:
            m = level_measure(c, s, t)
            if c.direction is Direction.UP:
                up += m
            else:
                down += m
    return up, down
