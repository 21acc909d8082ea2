"""Seeded random test instances with small rational data.

Positions are ``k/d`` in ``[-10, 10]`` with ``d <= 12``; weights are a
composition of an integer ``D <= 12`` divided by ``D``, so every measure is a
probability with denominators at most 12.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .measure import Measure

__all__ = [
    "random_position",
    "random_weights",
    "random_atomic_pair",
    "random_mixed_pair",
    "random_separated_pair",
]

MAX_DEN = 12
SPAN = 10


def random_position(rng: random.Random, lo=-SPAN, hi=SPAN) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    while True:
        d = rng.randint(1, MAX_DEN)
        k_lo, k_hi = math.ceil(lo * d), math.floor(hi * d)
        if k_lo <= k_hi:
            return Fraction(rng.randint(k_lo, k_hi), d)


def random_weights(rng: random.Random, parts: int, total: int) -> list[Fraction]:
    """Uniform random composition of ``total`` into ``parts`` positive parts."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    bounds = [0] + cuts + [total]
    return [Fraction(b - a, total) for a, b in zip(bounds, bounds[1:])]


def _distinct_positions(rng, count, lo=-SPAN, hi=SPAN, pool=()) -> list[Fraction]:
    out: set[Fraction] = set()
    pool = [p for p in pool if lo <= p <= hi]
    while len(out) < count:
        if pool and rng.random() < 0.3:
            out.add(rng.choice(pool))
        else:
            out.add(random_position(rng, lo, hi))
    return sorted(out)


def random_atomic_pair(rng: random.Random, max_atoms: int = 5) -> tuple[Measure, Measure]:
    """Two atomic probabilities; positions sometimes shared so common mass occurs."""
    m, n = rng.randint(1, max_atoms), rng.randint(1, max_atoms)
    total = rng.randint(max(m, n, 2), MAX_DEN)
    xs = _distinct_positions(rng, m)
    ys = _distinct_positions(rng, n, pool=xs)
    mu = Measure(atoms=zip(xs, random_weights(rng, m, total)))
    nu = Measure(atoms=zip(ys, random_weights(rng, n, total)))
    return mu, nu


def _random_mixed(rng, parts, total, pool=()) -> Measure:
    ws = random_weights(rng, parts, total)
    atoms, uniforms = [], []
    for w in ws:
        if rng.random() < 0.5:
            atoms.append((_distinct_positions(rng, 1, pool=pool)[0], w))
        else:
            a, b = _distinct_positions(rng, 2, pool=pool)
            uniforms.append((a, b, w))
    return Measure(atoms=atoms, uniforms=uniforms)


def random_mixed_pair(rng: random.Random, max_parts: int = 4) -> tuple[Measure, Measure]:
    """Probabilities made of atoms and uniform pieces."""
    m, n = rng.randint(1, max_parts), rng.randint(1, max_parts)
    total = rng.randint(max(m, n, 2), MAX_DEN)
    mu = _random_mixed(rng, m, total)
    pool = mu.breakpoints()
    return mu, _random_mixed(rng, n, total, pool=pool)


def random_separated_pair(rng: random.Random, max_atoms: int = 5) -> tuple[Measure, Measure]:
    """Atomic pair with ``supp(nu) < a < supp(mu)`` for some cut ``a``."""
    m, n = rng.randint(1, max_atoms), rng.randint(1, max_atoms)
    total = rng.randint(max(m, n, 2), MAX_DEN)
    cut = random_position(rng, -SPAN + 1, SPAN - 1)
    xs = _distinct_positions(rng, m, cut + Fraction(1, MAX_DEN), SPAN)
    ys = _distinct_positions(rng, n, -SPAN, cut - Fraction(1, MAX_DEN))
    return (
        Measure(atoms=zip(xs, random_weights(rng, m, total))),
        Measure(atoms=zip(ys, random_weights(rng, n, total))),
    )
