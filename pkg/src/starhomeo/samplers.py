"""Seeded random generators for stars, PL data and composite elements.

Denominators are kept small so random composites stay cheap to compare.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import Star, star_from_profile
from .homeo import Homeo, compose, inverse, restrict, separable
from .numerics import PLCircleMap, PLHomeo01

_GRIDS = (4, 5, 6, 8)


def _distinct(rng: random.Random, n: int, den: int, lo: int = 0, hi: int | None = None) -> list[Fraction]:
    hi = den - 1 if hi is None else hi
    pool = list(range(lo, hi + 1))
    return sorted(Fraction(k, den) for k in rng.sample(pool, min(n, len(pool))))


def random_star(rng: random.Random, lo=Fraction(1, 2), hi=Fraction(2), max_breaks: int = 4) -> Star:
    """PL star with 1..max_breaks breakpoints and values on a 1/4 grid in [lo, hi]."""
    den = rng.choice(_GRIDS)
    ts = _distinct(rng, rng.randint(1, max_breaks), den)
    vals = [v for v in (Fraction(k, 4) for k in range(int(lo * 4), int(hi * 4) + 1)) if v > 0]
    return star_from_profile((t, rng.choice(vals)) for t in ts)


def random_profile(rng: random.Random, max_inner: int = 2) -> PLHomeo01:
    n = rng.randint(0, max_inner)
    xs = _distinct(rng, n, 8, 1, 7)
    ys = _distinct(rng, n, 8, 1, 7)
    return PLHomeo01([(0, 0), *zip(xs, ys), (1, 1)])


def random_circle_map(rng: random.Random) -> PLCircleMap:
    shift = Fraction(rng.randrange(8), 8)
    if rng.random() < 0.5:
        return PLCircleMap.orthogonal(shift, flip=rng.random() < 0.3)
    x = Fraction(rng.randint(1, 5), 6)
    y = Fraction(rng.randint(1, 3), 4)
    lift = PLCircleMap([(0, shift), (x, shift + y), (1, shift + 1)])
    if rng.random() < 0.3:
        lift = PLCircleMap.reflection(0).then(lift)
    return lift


def random_separable(rng: random.Random) -> Homeo:
    return separable(random_star(rng), random_star(rng), random_circle_map(rng), random_profile(rng))


def random_element(rng: random.Random, depth: int = 3) -> Homeo:
    """A separable primitive combined by compose/inverse/restrict to the given depth."""
    if depth <= 0 or rng.random() < 0.25:
        return random_separable(rng)
    op = rng.choice(("compose", "compose", "inverse", "restrict"))
    if op == "compose":
        return compose(random_element(rng, depth - 1), random_element(rng, depth - 1))
    if op == "inverse":
        return inverse(random_element(rng, depth - 1))
    return restrict(random_element(rng, depth - 1), random_star(rng))
