"""Star bodies at the origin of the plane, described by their radial functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import radial as rx
from .numerics import PLCircleMap, PLPeriodic, Q, turn
from .tribool import TriBool

DEFAULT_BUDGET = 20
NODE_CAP = 4000


@dataclass(frozen=True)
class PolarPoint:
    theta: Fraction
    s: Fraction

    def __post_init__(self):
        s = Q(self.s)
        if s < 0:
            raise ValueError("radius must be non-negative")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "theta", turn(self.theta) if s else Fraction(0))

    @property
    def is_origin(self) -> bool:
        return self.s == 0

    def __repr__(self) -> str:
        return f"({self.theta}, {self.s})"


ORIGIN = PolarPoint(0, 0)


def circ_dist(a, b) -> Fraction:
    d = turn(Q(a) - Q(b))
    return min(d, 1 - d)


@dataclass(frozen=True)
class Arc:
    """Open arc ``(center - halfwidth, center + halfwidth)`` of the circle."""

    center: Fraction
    halfwidth: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", turn(self.center))
        hw = Q(self.halfwidth)
        if not 0 < hw < Fraction(1, 2):
            raise ValueError("arc halfwidth must lie in (0, 1/2)")
        object.__setattr__(self, "halfwidth", hw)

    @property
    def width(self) -> Fraction:
        return 2 * self.halfwidth

    def __contains__(self, theta) -> bool:
        return circ_dist(theta, self.center) < self.halfwidth


class Star:
    """Compact star body with the origin in its interior.

    ``radial`` is a canonical radial expression; when it is a PL leaf the star
    is in the exact fragment (``star.pl`` gives the :class:`PLPeriodic`).
    """

    __slots__ = ("radial", "positivity")

    def __init__(self, radial, certify: bool = True):
        if isinstance(radial, PLPeriodic):
            radial = rx.leaf(radial)
        if not isinstance(radial, rx.Expr):
            raise TypeError("radial must be a PLPeriodic or a radial expression")
        self.radial = radial
        self.positivity = "exact"
        if radial.is_pl:
            if min(radial.f.values()) <= 0:
                raise ValueError("radial function must be strictly positive")
        elif certify:
            self.positivity = _certify_positive(radial)

    @property
    def is_pl(self) -> bool:
        return self.radial.is_pl

    @property
    def pl(self) -> PLPeriodic | None:
        return self.radial.f if self.radial.is_pl else None

    def __call__(self, theta) -> Fraction:
        return self.radial.eval(turn(theta))

    def contains(self, p: PolarPoint) -> bool:
        return p.s == 0 or p.s <= self(p.theta)

    def __eq__(self, other) -> bool:
        return isinstance(other, Star) and self.radial == other.radial

    def __hash__(self) -> int:
        return hash(("Star", self.radial))

    def __repr__(self) -> str:
        pl = self.pl
        if pl is not None and pl.is_const:
            return f"B[{pl.points[0][1]}]"
        return f"Star({self.radial!r})"


def _certify_positive(expr: rx.Expr, depth: int = 8) -> str:
    arcs = [(Fraction(0), Fraction(1), 0)]
    while arcs:
        a, b, d = arcs.pop()
        if expr.enclose(a, b).lo > 0:
            continue
        m = (a + b) / 2
        if expr.eval(turn(m)) <= 0:
            raise ValueError(f"radial function not positive at {turn(m)}")
        if d >= depth:
            return "sampled"
        arcs += [(a, m, d + 1), (m, b, d + 1)]
    return "certified"


# ---------------------------------------------------------------------------
# constructors


def star_ball(r) -> Star:
    r = Q(r)
    if r <= 0:
        raise ValueError("ball radius must be positive")
    return Star(PLPeriodic.const(r))


def star_from_profile(breakpoints: Iterable) -> Star:
    pts = [(Q(t), Q(v)) for t, v in breakpoints]
    ts = [t for t, _ in pts]
    if any(not 0 <= t < 1 for t in ts) or ts != sorted(ts):
        raise ValueError("breakpoints must be ordered turns in [0, 1)")
    return Star(PLPeriodic(pts))


def tent(center, halfwidth, height) -> PLPeriodic:
    """PL bump: ``height`` at ``center``, zero off the arc of given halfwidth."""
    arc = Arc(center, halfwidth)
    h = Q(height)
    c, hw = arc.center, arc.halfwidth
    return PLPeriodic([(c - hw, 0), (c, h), (c + hw, 0)])


def star_bump(base: Star, center, halfwidth, height) -> Star:
    """``rho_base * (1 + f)`` for the tent ``f`` of the given height."""
    h = Q(height)
    if h <= 0:
        raise ValueError("bump height must be positive")
    f = tent(center, halfwidth, h)
    one_plus = PLPeriodic((t, 1 + v) for t, v in f.points)
    if base.is_pl:
        c, hw = turn(center), Q(halfwidth)
        lo, hi = base.pl.min_max(c - hw, c + hw)
        if lo == hi:
            # base is constant on the support, so the product stays PL
            ts = set(base.pl.breakpoints()) | set(f.breakpoints())
            return Star(PLPeriodic((t, base(t) * one_plus(t)) for t in ts))
    return Star(rx.mul(base.radial, rx.leaf(one_plus)))


# ---------------------------------------------------------------------------
# operations


def radial_eval(S: Star, theta) -> Fraction:
    return S(theta)


def star_contains(S: Star, p: PolarPoint) -> bool:
    return S.contains(p)


def star_intersect(S: Star, T: Star) -> Star:
    return Star(rx.rmin(S.radial, T.radial), certify=False)


def star_rotate(S: Star, t) -> Star:
    """Image of ``S`` under rotation by ``t`` turns."""
    return Star(rx.pullback(S.radial, PLCircleMap.rotation(-Q(t))), certify=False)


def star_pullback(S: Star, c: PLCircleMap) -> Star:
    return Star(rx.pullback(S.radial, c), certify=False)


def star_leq(S: Star, T: Star, budget: int = DEFAULT_BUDGET) -> TriBool:
    """Certified ``S ⊆ T``; a False verdict carries a direction with ρ_S > ρ_T."""
    if S == T or _lattice_member(S.radial, T.radial):
        return TriBool.true(mode="exact")
    if S.is_pl and T.is_pl:
        ts = set(S.pl.breakpoints()) | set(T.pl.breakpoints())
        for t in sorted(ts):
            if S(t) > T(t):
                return TriBool.false(t, mode="exact")
        return TriBool.true(mode="exact")
    return _bnb_leq(S.radial, T.radial, budget)


def _lattice_member(f: rx.Expr, g: rx.Expr) -> bool:
    """min(.., g, ..) <= g and f <= max(.., f, ..), read off the structure."""
    if isinstance(f, rx.Min):
        gs = g.items if isinstance(g, rx.Min) else (g,)
        return all(x in f.items for x in gs)
    return isinstance(g, rx.Max) and f in g.items


def _bnb_leq(f: rx.Expr, g: rx.Expr, budget: int) -> TriBool:
    for k in range(64):
        t = Fraction(k, 64)
        if f.eval(t) > g.eval(t):
            return TriBool.false(t, mode="exact")
    if budget <= 0:
        return TriBool.unknown(mode="budget", depth=0)
    arcs = [(Fraction(0), Fraction(1), 0)]
    nodes = 0
    exhausted = False
    while arcs:
        a, b, d = arcs.pop()
        nodes += 1
        if f.enclose(a, b).hi <= g.enclose(a, b).lo:
            continue
        m = (a + b) / 2
        if f.eval(turn(m)) > g.eval(turn(m)):
            return TriBool.false(turn(m), mode="exact")
        if d >= budget or nodes >= NODE_CAP:
            exhausted = True
            continue
        arcs += [(a, m, d + 1), (m, b, d + 1)]
    if exhausted:
        return TriBool.unknown(mode="budget", depth=budget, nodes=nodes)
    return TriBool.true(mode="certified", nodes=nodes)


@dataclass(frozen=True)
class Comparison:
    relation: str  # Equal | ProperSubset | ProperSuperset | Incomparable | Unknown
    below: TriBool  # S ⊆ T
    above: TriBool  # T ⊆ S

    @property
    def witnesses(self) -> dict:
        out = {}
        if self.below.is_false:
            out["S>T"] = self.below.witness
        if self.above.is_false:
            out["S<T"] = self.above.witness
        return out


def star_compare(S: Star, T: Star, budget: int = DEFAULT_BUDGET) -> Comparison:
    below = star_leq(S, T, budget)
    above = star_leq(T, S, budget)
    if below.is_true and above.is_true:
        rel = "Equal"
    elif below.is_true and above.is_false:
        rel = "ProperSubset"
    elif below.is_false and above.is_true:
        rel = "ProperSuperset"
    elif below.is_false and above.is_false:
        rel = "Incomparable"
    else:
        rel = "Unknown"
    return Comparison(rel, below, above)


def star_equal(S: Star, T: Star, budget: int = DEFAULT_BUDGET) -> TriBool:
    """Equality of stars: exact when decidable, refuted by a witness direction."""
    if S == T:
        return TriBool.true(mode="exact")
    if S.is_pl and T.is_pl:
        ts = sorted(set(S.pl.breakpoints()) | set(T.pl.breakpoints()))
        t = next(t for t in ts if S(t) != T(t))
        return TriBool.false(t, mode="exact")
    c = star_compare(S, T, budget)
    if c.relation == "Equal":
        return TriBool.true(mode="certified")
    if c.below.is_false:
        return TriBool.false(c.below.witness, mode="exact")
    if c.above.is_false:
        return TriBool.false(c.above.witness, mode="exact")
    return TriBool.unknown(mode="budget", depth=budget)
