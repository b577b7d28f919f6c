"""Exact rational arithmetic and piecewise-linear function algebra.

Directions on the circle are rational *turns* (1 turn = one revolution), so
rotations are exact rational shifts.  Three PL families live here:

* :class:`PLHomeo01` -- increasing homeomorphisms of [0, 1] (radial profiles),
* :class:`PLCircleMap` -- circle homeomorphisms given by a PL lift,
* :class:`PLPeriodic` -- continuous period-1 functions (radial functions).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Rational = Fraction
Point = tuple[Fraction, Fraction]


def Q(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: silently importing a binary approximation would break
    exactness everywhere downstream.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE") and "/" not in text:
            raise TypeError(f"refusing decimal literal {value!r}; use p/q")
        return Fraction(text)
    raise TypeError(f"cannot make a rational from {value!r}")


def turn(value) -> Fraction:
    """Reduce a rational direction modulo 1."""
    return Q(value) % 1


def fmt(q: Fraction) -> str:
    q = Q(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _interp(p0: Point, p1: Point, x: Fraction) -> Fraction:
    (x0, y0), (x1, y1) = p0, p1
    if x == x0:
        return y0
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _collinear(a: Point, b: Point, c: Point) -> bool:
    return (b[1] - a[1]) * (c[0] - b[0]) == (c[1] - b[1]) * (b[0] - a[0])


def _merge_collinear(points: Sequence[Point]) -> list[Point]:
    out: list[Point] = [points[0]]
    for i in range(1, len(points) - 1):
        if not _collinear(out[-1], points[i], points[i + 1]):
            out.append(points[i])
    out.append(points[-1])
    return out


def _eval_chain(points: Sequence[Point], xs: Sequence[Fraction], x: Fraction) -> Fraction:
    i = bisect.bisect_right(xs, x)
    if i >= len(points):
        return points[-1][1]
    if i == 0:
        return points[0][1]
    return _interp(points[i - 1], points[i], x)


def _solve_chain(points: Sequence[Point], y: Fraction) -> Fraction:
    """Invert a strictly monotone chain at ``y`` (y inside its range)."""
    increasing = points[-1][1] > points[0][1]
    for p0, p1 in zip(points, points[1:]):
        lo, hi = (p0[1], p1[1]) if increasing else (p1[1], p0[1])
        if lo <= y <= hi:
            return _interp((p0[1], p0[0]), (p1[1], p1[0]), y)
    raise ValueError(f"{y} outside the range of the chain")


class RatInterval:
    """Closed rational interval ``[lo, hi]``."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Q(lo)
        hi = lo if hi is None else Q(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __mul__(self, other: RatInterval) -> RatInterval:
        prods = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return RatInterval(min(prods), max(prods))

    def reciprocal(self) -> RatInterval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatInterval) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"RatInterval({self.lo}, {self.hi})"


# ---------------------------------------------------------------------------
# increasing homeomorphisms of [0, 1]


class PLHomeo01:
    """Increasing PL homeomorphism of [0, 1] with rational breakpoints."""

    __slots__ = ("points", "_xs")

    def __init__(self, points: Iterable = ((0, 0), (1, 1))):
        pts = [(Q(x), Q(y)) for x, y in points]
        if pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise ValueError("profile must run from (0,0) to (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise ValueError("profile must be strictly increasing in x and y")
        self.points = tuple(_merge_collinear(pts))
        self._xs = [p[0] for p in self.points]

    @classmethod
    def identity(cls) -> PLHomeo01:
        return cls()

    @property
    def is_identity(self) -> bool:
        return len(self.points) == 2

    def __call__(self, x) -> Fraction:
        x = Q(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} outside [0, 1]")
        return _eval_chain(self.points, self._xs, x)

    def solve(self, y) -> Fraction:
        y = Q(y)
        if not 0 <= y <= 1:
            raise ValueError(f"{y} outside [0, 1]")
        return _solve_chain(self.points, y)

    def inverse(self) -> PLHomeo01:
        return PLHomeo01((y, x) for x, y in self.points)

    def then(self, g: PLHomeo01) -> PLHomeo01:
        """The composite x -> g(self(x))."""
        xs = set(self._xs)
        xs.update(self.solve(b) for b, _ in g.points)
        return PLHomeo01((x, g(self(x))) for x in sorted(xs))

    def max_slope(self) -> Fraction:
        return max((y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]))

    def __eq__(self, other) -> bool:
        return isinstance(other, PLHomeo01) and self.points == other.points

    def __hash__(self) -> int:
        return hash(("PLHomeo01", self.points))

    def __repr__(self) -> str:
        return "PLHomeo01([" + ", ".join(f"({x}, {y})" for x, y in self.points) + "])"


# ---------------------------------------------------------------------------
# circle homeomorphisms


class PLCircleMap:
    """Circle homeomorphism induced by a PL lift on [0, 1].

    The lift satisfies ``lift(1) = lift(0) + deg`` with ``deg`` = +1
    (orientation preserving) or -1 (reversing), and is stored normalized so
    that ``lift(0)`` lies in [0, 1).
    """

    __slots__ = ("points", "deg", "_xs")

    def __init__(self, points: Iterable, deg: int = 1):
        pts = [(Q(x), Q(y)) for x, y in points]
        if deg not in (1, -1):
            raise ValueError("degree must be +1 or -1")
        if pts[0][0] != 0 or pts[-1][0] != 1:
            raise ValueError("lift breakpoints must span [0, 1]")
        if pts[-1][1] - pts[0][1] != deg:
            raise ValueError("lift(1) - lift(0) must equal the degree")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or (y1 - y0) * deg <= 0:
                raise ValueError("lift must be strictly monotone")
        shift = math.floor(pts[0][1])
        pts = [(x, y - shift) for x, y in pts]
        self.points = tuple(_merge_collinear(pts))
        self.deg = deg
        self._xs = [p[0] for p in self.points]

    @classmethod
    def rotation(cls, t) -> PLCircleMap:
        t = turn(t)
        return cls([(0, t), (1, t + 1)])

    @classmethod
    def reflection(cls, axis=0) -> PLCircleMap:
        """theta -> 2*axis - theta."""
        a = turn(2 * Q(axis))
        return cls([(0, a), (1, a - 1)], deg=-1)

    @classmethod
    def orthogonal(cls, shift, flip: bool = False) -> PLCircleMap:
        """Rotation by ``shift``, preceded by theta -> -theta when ``flip``."""
        if flip:
            return cls.reflection(0).then(cls.rotation(shift))
        return cls.rotation(shift)

    @classmethod
    def identity(cls) -> PLCircleMap:
        return cls.rotation(0)

    @property
    def is_identity(self) -> bool:
        return self.deg == 1 and self.points == ((0, 0), (1, 1))

    def lift(self, x) -> Fraction:
        """Periodic extension of the lift to all rationals."""
        x = Q(x)
        k = math.floor(x)
        return _eval_chain(self.points, self._xs, x - k) + k * self.deg

    def lift_solve(self, y) -> Fraction:
        """The unique x with lift(x) = y."""
        y = Q(y)
        y0 = self.points[0][1]
        if self.deg == 1:
            k = math.floor(y - y0)
        else:
            k = math.floor(y0 - y)
        local = y - k * self.deg
        return _solve_chain(self.points, local) + k

    def __call__(self, theta) -> Fraction:
        return self.lift(turn(theta)) % 1

    def solve(self, theta) -> Fraction:
        return self.lift_solve(turn(theta)) % 1

    def breakpoints(self) -> list[Fraction]:
        return [x for x in self._xs if x < 1]

    def inverse(self) -> PLCircleMap:
        ys = {Fraction(0), Fraction(1)}
        for _, y in self.points:
            frac = y - math.floor(y)
            ys.add(frac)
        return PLCircleMap(((y, self.lift_solve(y)) for y in sorted(ys)), self.deg)

    def then(self, g: PLCircleMap) -> PLCircleMap:
        """The composite theta -> g(self(theta)) on the lift level."""
        xs = set(self._xs)
        lo, hi = sorted((self.lift(0), self.lift(1)))
        for b, _ in g.points:
            for k in range(math.floor(lo) - 1, math.ceil(hi) + 2):
                v = b + k
                if lo <= v <= hi:
                    xs.add(self.lift_solve(v))
        pts = [(x, g.lift(self.lift(x))) for x in sorted(xs)]
        return PLCircleMap(pts, self.deg * g.deg)

    def max_slope(self) -> Fraction:
        return max(abs((y1 - y0) / (x1 - x0)) for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]))

    def __eq__(self, other) -> bool:
        return isinstance(other, PLCircleMap) and (self.deg, self.points) == (other.deg, other.points)

    def __hash__(self) -> int:
        return hash(("PLCircleMap", self.deg, self.points))

    def __repr__(self) -> str:
        body = ", ".join(f"({x}, {y})" for x, y in self.points)
        return f"PLCircleMap([{body}], deg={self.deg})"


# ---------------------------------------------------------------------------
# periodic functions


class PLPeriodic:
    """Continuous period-1 PL function of a turn.

    Breakpoints ``(theta, v)`` have distinct thetas in [0, 1); between the last
    breakpoint and the first one (plus a turn) the function is linear.  The
    stored form is canonical: collinear breakpoints are dropped cyclically and a
    constant is stored as the single breakpoint ``(0, v)``.
    """

    __slots__ = ("points", "_xs")

    def __init__(self, points: Iterable):
        raw = sorted((turn(t), Q(v)) for t, v in points)
        if not raw:
            raise ValueError("need at least one breakpoint")
        for (t0, _), (t1, _) in zip(raw, raw[1:]):
            if t0 == t1:
                raise ValueError(f"duplicate breakpoint at {t0}")
        self.points = _canonical_cycle(raw)
        self._xs = [p[0] for p in self.points]

    @classmethod
    def const(cls, v) -> PLPeriodic:
        return cls([(0, v)])

    @property
    def is_const(self) -> bool:
        return len(self.points) == 1

    def __call__(self, theta) -> Fraction:
        theta = turn(theta)
        pts = self.points
        if len(pts) == 1:
            return pts[0][1]
        i = bisect.bisect_right(self._xs, theta)
        if i == 0:
            last = pts[-1]
            return _interp((last[0] - 1, last[1]), pts[0], theta)
        if i == len(pts):
            first = pts[0]
            return _interp(pts[-1], (first[0] + 1, first[1]), theta)
        return _interp(pts[i - 1], pts[i], theta)

    def breakpoints(self) -> list[Fraction]:
        return list(self._xs)

    def values(self) -> list[Fraction]:
        return [v for _, v in self.points]

    def scale(self, c) -> PLPeriodic:
        c = Q(c)
        return PLPeriodic((t, v * c) for t, v in self.points)

    def shift(self, t) -> PLPeriodic:
        """theta -> self(theta - t)."""
        t = Q(t)
        return PLPeriodic((s + t, v) for s, v in self.points)

    def pullback(self, c: PLCircleMap) -> PLPeriodic:
        """theta -> self(c(theta))."""
        if c.is_identity:
            return self
        ts = set(c.breakpoints())
        ts.update(c.solve(b) for b in self._xs)
        return PLPeriodic((t, self(c(t))) for t in ts)

    def min_max(self, lo, hi) -> tuple[Fraction, Fraction]:
        """Exact range over the closed arc from ``lo`` to ``hi`` (hi >= lo, turns)."""
        lo, hi = Q(lo), Q(hi)
        if hi - lo >= 1:
            vals = self.values()
        else:
            vals = [self(lo), self(hi)]
            base = math.floor(lo)
            for k in (base, base + 1):
                for t in self._xs:
                    if lo < t + k < hi:
                        vals.append(self(t))
        return min(vals), max(vals)

    def __eq__(self, other) -> bool:
        return isinstance(other, PLPeriodic) and self.points == other.points

    def __hash__(self) -> int:
        return hash(("PLPeriodic", self.points))

    def __repr__(self) -> str:
        return "PLPeriodic([" + ", ".join(f"({t}, {v})" for t, v in self.points) + "])"


def _canonical_cycle(raw: list[Point]) -> tuple[Point, ...]:
    pts = list(raw)
    changed = True
    while changed and len(pts) > 1:
        changed = False
        n = len(pts)
        for i in range(n):
            prev = pts[i - 1] if i > 0 else (pts[-1][0] - 1, pts[-1][1])
            nxt = pts[i + 1] if i + 1 < n else (pts[0][0] + 1, pts[0][1])
            if n == 2:
                # two points are collinear cyclically only when values agree
                if pts[0][1] == pts[1][1]:
                    pts = [pts[0]]
                    changed = True
                break
            if _collinear(prev, pts[i], nxt):
                del pts[i]
                changed = True
                break
    if len(pts) == 1:
        return ((Fraction(0), pts[0][1]),)
    return tuple(pts)


def _combine(f: PLPeriodic, g: PLPeriodic, pick: Callable[[Fraction, Fraction], Fraction]) -> PLPeriodic:
    ts = sorted(set(f.breakpoints()) | set(g.breakpoints()))
    grid = list(ts)
    for i, t0 in enumerate(ts):
        t1 = ts[i + 1] if i + 1 < len(ts) else ts[0] + 1
        d0 = f(t0) - g(t0)
        d1 = f(t1) - g(t1)
        if d0 * d1 < 0:
            grid.append(turn(t0 + (t1 - t0) * d0 / (d0 - d1)))
    return PLPeriodic((t, pick(f(t), g(t))) for t in set(grid))


def pl_min(f: PLPeriodic, g: PLPeriodic) -> PLPeriodic:
    if f == g:
        return f
    return _combine(f, g, min)


def pl_max(f: PLPeriodic, g: PLPeriodic) -> PLPeriodic:
    if f == g:
        return f
    return _combine(f, g, max)


# ---------------------------------------------------------------------------
# generic front doors


def pl_eval(f, x) -> Fraction:
    if isinstance(f, PLCircleMap):
        return f.lift(x)
    return f(x)


def pl_compose(f, g):
    """Composite "f then g" (x -> g(f(x)))."""
    if isinstance(f, PLHomeo01) and isinstance(g, PLHomeo01):
        return f.then(g)
    if isinstance(f, PLCircleMap) and isinstance(g, PLCircleMap):
        return f.then(g)
    if isinstance(f, PLCircleMap) and isinstance(g, PLPeriodic):
        return g.pullback(f)
    raise TypeError(f"cannot compose {type(f).__name__} with {type(g).__name__}")


def pl_inverse(f):
    if isinstance(f, (PLHomeo01, PLCircleMap)):
        return f.inverse()
    raise TypeError(f"{type(f).__name__} has no inverse")


def circle_apply(m: PLCircleMap, theta) -> Fraction:
    return m(theta)


@dataclass(frozen=True)
class Extrema:
    min: RatInterval
    max: RatInterval
    argmin: Fraction | None = None
    argmax: Fraction | None = None
    certified: bool = True
    depth: int = 0


def pl_extrema(f, window: tuple | None = None, width=Fraction(1, 10**6), budget: int = 20) -> Extrema:
    """Extrema of a radial function over the circle or a turn window.

    PL input gives degenerate (exact) enclosures attained at breakpoints.  Any
    other object exposing ``__call__(theta)`` and ``enclose(lo, hi)`` is handled
    by interval branch-and-bound down to the requested width; if the budget
    runs out first the result carries ``certified=False``.
    """
    lo, hi = (Fraction(0), Fraction(1)) if window is None else (Q(window[0]), Q(window[1]))
    if isinstance(f, PLPeriodic):
        cands = [lo, hi] if window is not None else []
        base = math.floor(lo)
        for k in (base, base + 1):
            cands += [t + k for t in f.breakpoints() if lo <= t + k <= hi]
        if window is None:
            cands = f.breakpoints()
        vals = [(f(t), turn(t)) for t in cands]
        mn = min(vals)
        mx = max(vals, key=lambda p: (p[0], -p[1]))
        return Extrema(RatInterval(mn[0]), RatInterval(mx[0]), mn[1], mx[1])
    return _branch_and_bound(f, lo, hi, Q(width), budget)


def _branch_and_bound(f, lo: Fraction, hi: Fraction, width: Fraction, budget: int) -> Extrema:
    best = {}

    def sample(t):
        v = f(turn(t))
        if "max" not in best or v > best["max"][0]:
            best["max"] = (v, turn(t))
        if "min" not in best or v < best["min"][0]:
            best["min"] = (v, turn(t))

    sample(lo)
    sample(hi)
    sample((lo + hi) / 2)
    arcs = [(lo, hi, 0)]
    up_bound = []  # arcs kept for the upper enclosure
    lo_bound = []
    reached = 0
    while arcs:
        a, b, d = arcs.pop()
        reached = max(reached, d)
        enc = f.enclose(a, b)
        need_max = enc.hi > best["max"][0] + width
        need_min = enc.lo < best["min"][0] - width
        if not (need_max or need_min):
            up_bound.append(enc.hi)
            lo_bound.append(enc.lo)
            continue
        if d >= budget:
            up_bound.append(enc.hi)
            lo_bound.append(enc.lo)
            continue
        m = (a + b) / 2
        sample(m)
        arcs.append((a, m, d + 1))
        arcs.append((m, b, d + 1))
    max_hi = max(up_bound + [best["max"][0]])
    min_lo = min(lo_bound + [best["min"][0]])
    certified = max_hi - best["max"][0] <= width and best["min"][0] - min_lo <= width
    return Extrema(
        RatInterval(min_lo, best["min"][0]),
        RatInterval(best["max"][0], max_hi),
        best["min"][1],
        best["max"][1],
        certified,
        reached,
    )
