"""Finite measures on the real line with exact rational weights.

A :class:`Measure` is a finite sum of Dirac atoms plus uniform pieces, so its
CDF is piecewise linear with jumps.  Everything is stored as
:class:`fractions.Fraction` and kept in a canonical form (merged atoms,
disjoint uniform pieces with maximal runs of equal density), which makes
``==`` an exact equality of measures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import DomainError

__all__ = [
    "Atom",
    "Piece",
    "Measure",
    "CommonMassSplit",
    "QuantilePiece",
    "to_fraction",
    "cdf_at",
    "quantile_at",
    "common_mass_split",
    "first_moment",
    "quantile_pieces",
    "discretize",
]


def to_fraction(value) -> Fraction:
    """Exact conversion; floats go through their shortest repr, strings through
    :class:`Fraction` parsing (``"0.25"``, ``"1/4"``, ``"-3"``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class Atom(NamedTuple):
    x: Fraction
    w: Fraction


class Piece(NamedTuple):
    """Mass ``w`` spread uniformly on ``[a, b]``."""

    a: Fraction
    b: Fraction
    w: Fraction

    @property
    def density(self) -> Fraction:
        return self.w / (self.b - self.a)


def _canonical_atoms(atoms: Iterable) -> tuple[Atom, ...]:
    merged: dict[Fraction, Fraction] = {}
    for x, w in atoms:
        x, w = to_fraction(x), to_fraction(w)
        if w < 0:
            raise DomainError(f"negative atom weight {w} at {x}")
        merged[x] = merged.get(x, Fraction(0)) + w
    return tuple(Atom(x, w) for x, w in sorted(merged.items()) if w != 0)


def _density_profile(pieces: Iterable[tuple[Fraction, Fraction, Fraction]]):
    """Elementary cells ``(left, right, density)`` of a sum of uniform densities.

    ``pieces`` carry a density directly (not a weight).
    """
    pieces = list(pieces)
    cuts = sorted({p[0] for p in pieces} | {p[1] for p in pieces})
    cells = []
    for left, right in zip(cuts, cuts[1:]):
        d = sum((p[2] for p in pieces if p[0] <= left and right <= p[1]), Fraction(0))
        cells.append((left, right, d))
    return cells


def _pieces_from_cells(cells) -> tuple[Piece, ...]:
    """Merge contiguous equal-density cells, drop zero density."""
    out: list[list[Fraction]] = []
    for left, right, d in cells:
        if d < 0:
            raise DomainError("negative density")
        if d == 0:
            continue
        if out and out[-1][1] == left and out[-1][2] == d:
            out[-1][1] = right
        else:
            out.append([left, right, d])
    return tuple(Piece(a, b, d * (b - a)) for a, b, d in out)


def _canonical_pieces(uniforms: Iterable) -> tuple[Piece, ...]:
    dens = []
    for a, b, w in uniforms:
        a, b, w = to_fraction(a), to_fraction(b), to_fraction(w)
        if not a < b:
            raise DomainError(f"uniform piece needs left < right, got [{a}, {b}]")
        if w < 0:
            raise DomainError(f"negative uniform weight {w}")
        if w:
            dens.append((a, b, w / (b - a)))
    return _pieces_from_cells(_density_profile(dens))


@dataclass(frozen=True)
class Measure:
    """Atoms plus uniform pieces, canonicalized on construction.

    >>> Measure(atoms=[(0, "1/2"), (5, "1/2")]).total_mass
    Fraction(1, 1)
    """

    atoms: tuple[Atom, ...] = ()
    uniforms: tuple[Piece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms))
        object.__setattr__(self, "uniforms", _canonical_pieces(self.uniforms))

    @classmethod
    def dirac(cls, x, w=1) -> "Measure":
        return cls(atoms=[(x, w)])

    @classmethod
    def uniform(cls, a, b, w=1) -> "Measure":
        return cls(uniforms=[(a, b, w)])

    @property
    def total_mass(self) -> Fraction:
        return sum((a.w for a in self.atoms), Fraction(0)) + sum(
            (p.w for p in self.uniforms), Fraction(0)
        )

    @property
    def is_atomic(self) -> bool:
        return not self.uniforms

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.uniforms

    def breakpoints(self) -> list[Fraction]:
        pts = {a.x for a in self.atoms}
        for p in self.uniforms:
            pts.update((p.a, p.b))
        return sorted(pts)

    def atom_at(self, x) -> Fraction:
        x = to_fraction(x)
        for a in self.atoms:
            if a.x == x:
                return a.w
        return Fraction(0)

    def density_at(self, x) -> Fraction:
        """Density on the open cell containing ``x``; pieces are disjoint so at
        most one matches.  Value at piece endpoints is irrelevant."""
        x = to_fraction(x)
        for p in self.uniforms:
            if p.a < x < p.b:
                return p.density
        return Fraction(0)

    def mass_between(self, s, t) -> Fraction:
        """Mass of the half-open interval ``]s, t]``; ``None`` means infinite."""
        hi = self.total_mass if t is None else cdf_at(self, t)
        lo = Fraction(0) if s is None else cdf_at(self, s)
        return hi - lo

    def scaled(self, c) -> "Measure":
        c = to_fraction(c)
        if c < 0:
            raise DomainError("negative scale")
        return Measure(
            atoms=[(a.x, a.w * c) for a in self.atoms],
            uniforms=[(p.a, p.b, p.w * c) for p in self.uniforms],
        )

    def __add__(self, other: "Measure") -> "Measure":
        return Measure(
            atoms=self.atoms + other.atoms, uniforms=self.uniforms + other.uniforms
        )

    def __sub__(self, other: "Measure") -> "Measure":
        """Exact difference; raises :class:`DomainError` if it is not positive."""
        atoms = dict(self.atoms)
        for x, w in other.atoms:
            atoms[x] = atoms.get(x, Fraction(0)) - w
            if atoms[x] < 0:
                raise DomainError(f"difference has negative atom at {x}")
        dens = [(p.a, p.b, p.density) for p in self.uniforms]
        dens += [(p.a, p.b, -p.density) for p in other.uniforms]
        cells = _density_profile(dens)
        if any(d < 0 for _, _, d in cells):
            raise DomainError("difference has negative density")
        out = Measure(atoms=atoms.items())
        object.__setattr__(out, "uniforms", _pieces_from_cells(cells))
        return out


@dataclass(frozen=True)
class CommonMassSplit:
    """``mu = eta + mu0``, ``nu = eta + nu0`` with ``mu0`` and ``nu0`` singular."""

    eta: Measure
    mu0: Measure
    nu0: Measure


def cdf_at(m: Measure, x) -> Fraction:
    """``m(]-inf, x])``; atoms at ``x`` are included."""
    x = to_fraction(x)
    total = sum((a.w for a in m.atoms if a.x <= x), Fraction(0))
    for p in m.uniforms:
        if x >= p.b:
            total += p.w
        elif x > p.a:
            total += p.w * (x - p.a) / (p.b - p.a)
    return total


def cdf_left_at(m: Measure, x) -> Fraction:
    """Left limit ``m(]-inf, x[)``."""
    return cdf_at(m, x) - m.atom_at(x)


def quantile_at(m: Measure, alpha) -> Fraction:
    """Smallest ``x`` with ``cdf_at(m, x) >= alpha``, for ``0 < alpha <= mass``."""
    alpha = to_fraction(alpha)
    if not Fraction(0) < alpha <= m.total_mass:
        raise DomainError(f"quantile level {alpha} outside ]0, {m.total_mass}]")
    for q in quantile_pieces(m):
        if q.lo < alpha <= q.hi:
            return q.at(alpha)
    raise AssertionError("unreachable: pieces cover ]0, mass]")


def common_mass_split(mu: Measure, nu: Measure) -> CommonMassSplit:
    """``eta = mu ^ nu`` (atom-wise and density-wise minimum) and the residuals."""
    atoms = [(a.x, min(a.w, nu.atom_at(a.x))) for a in mu.atoms]
    cuts = sorted(
        {p.a for p in mu.uniforms + nu.uniforms} | {p.b for p in mu.uniforms + nu.uniforms}
    )
    cells = []
    for left, right in zip(cuts, cuts[1:]):
        mid = (left + right) / 2
        cells.append((left, right, min(mu.density_at(mid), nu.density_at(mid))))
    eta = Measure(atoms=atoms)
    object.__setattr__(eta, "uniforms", _pieces_from_cells(cells))
    return CommonMassSplit(eta=eta, mu0=mu - eta, nu0=nu - eta)


def first_moment(m: Measure) -> Fraction:
    """``integral |x| dm`` exactly."""
    total = sum((abs(a.x) * a.w for a in m.atoms), Fraction(0))
    for p in m.uniforms:
        d = p.density
        # split at 0 so |x| is linear on each part
        for lo, hi in ((p.a, min(p.b, Fraction(0))), (max(p.a, Fraction(0)), p.b)):
            if lo < hi:
                total += d * abs(hi * hi - lo * lo) / 2
    return total


class QuantilePiece(NamedTuple):
    """The quantile function on ``]lo, hi]`` is ``slope * alpha + intercept``.

    ``slope == 0`` marks an atom.
    """

    lo: Fraction
    hi: Fraction
    slope: Fraction
    intercept: Fraction

    def at(self, alpha) -> Fraction:
        return self.slope * alpha + self.intercept


def quantile_pieces(m: Measure) -> list[QuantilePiece]:
    """Partition of ``]0, mass]`` on which the quantile function is affine."""
    out: list[QuantilePiece] = []
    cum = Fraction(0)
    pts = m.breakpoints()
    for k, x in enumerate(pts):
        if k:
            left = pts[k - 1]
            d = m.density_at((left + x) / 2)
            if d:
                w = d * (x - left)
                out.append(QuantilePiece(cum, cum + w, 1 / d, left - cum / d))
                cum += w
        w = m.atom_at(x)
        if w:
            out.append(QuantilePiece(cum, cum + w, Fraction(0), x))
            cum += w
    return out


def discretize(m: Measure, n: int) -> Measure:
    """``n`` equal-mass atoms placed at the conditional medians of the
    quantile slices.  This is an approximation of ``m``, not ``m`` itself."""
    if n < 1:
        raise DomainError("need at least one atom")
    mass = m.total_mass
    if mass == 0:
        return Measure()
    return Measure(
        atoms=[(quantile_at(m, mass * (2 * k + 1) / (2 * n)), mass / n) for k in range(n)]
    )

