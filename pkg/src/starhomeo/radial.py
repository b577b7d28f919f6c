"""Exact radial expressions.

A radial function that is not piecewise linear (a domain pulled back through
a composite map, say) is kept as an expression over PL leaves.  Expressions
are immutable, hashable, and built only through the smart constructors
:func:`mul`, :func:`inv`, :func:`rmin`, :func:`rmax`, :func:`papply` and
:func:`pullback`, which keep them in a canonical form:

* products are monomials ``coef * prod(atom ** k)`` with atoms PL leaves, Min,
  Max or profile applications (Min/Max are *not* distributed, so a Min and its
  reciprocal cancel);
* PL members of a Min/Max are merged exactly;
* nested profile applications fuse, and a profile applied to a constant folds.

Structural equality of canonical expressions therefore implies equality of
the functions; the converse does not hold in general.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .numerics import PLCircleMap, PLHomeo01, PLPeriodic, Q, RatInterval, pl_max, pl_min, turn


class Expr:
    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and (self is other or self._key() == other._key())

    def _key(self):
        raise NotImplementedError

    @property
    def is_pl(self) -> bool:
        return False

    def __call__(self, theta) -> Fraction:
        return self.eval(turn(theta))


class Leaf(Expr):
    __slots__ = ("f",)

    def __init__(self, f: PLPeriodic):
        self.f = f

    def _key(self):
        return self.f

    @property
    def is_pl(self) -> bool:
        return True

    def eval(self, theta: Fraction) -> Fraction:
        return self.f(theta)

    def enclose(self, lo: Fraction, hi: Fraction) -> RatInterval:
        return RatInterval(*self.f.min_max(lo, hi))

    def __repr__(self) -> str:
        if self.f.is_const:
            return str(self.f.points[0][1])
        return f"PL{list((str(t), str(v)) for t, v in self.f.points)}"


class Prod(Expr):
    __slots__ = ("coef", "factors", "_spread")

    def __init__(self, coef: Fraction, factors: frozenset):
        self.coef = coef
        self.factors = factors  # frozenset of (atom, exponent)

    def _key(self):
        return (self.coef, self.factors)

    def eval(self, theta: Fraction) -> Fraction:
        out = self.coef
        for atom, k in self.factors:
            out *= atom.eval(theta) ** k
        return out

    def enclose(self, lo: Fraction, hi: Fraction) -> RatInterval:
        spread = self._spread_form()
        if spread is not None:
            return spread.enclose(lo, hi)
        out = RatInterval(self.coef)
        for atom, k in self.factors:
            e = atom.enclose(lo, hi)
            if k < 0:
                e = e.reciprocal()
            for _ in range(abs(k)):
                out = out * e
        return out

    def _spread_form(self) -> Expr | None:
        """Same function with one Min/Max factor multiplied through.

        Only used for enclosures: ``min(1, X) / X`` encloses badly as a
        product but tightly as ``min(1/X, 1)``.
        """
        try:
            return self._spread
        except AttributeError:
            pass
        out = None
        for atom, k in sorted(self.factors, key=lambda p: repr(p)):
            if isinstance(atom, _Lattice) and k in (1, -1):
                rest = dict(self.factors)
                del rest[atom]
                others = _from_monomial(self.coef, rest)
                if k == 1:
                    out = type(atom)(frozenset(mul(m, others) for m in atom.items))
                else:
                    flip = Max if isinstance(atom, Min) else Min
                    out = flip(frozenset(mul(inv(m), others) for m in atom.items))
                break
        object.__setattr__(self, "_spread", out)
        return out

    def __repr__(self) -> str:
        parts = [] if self.coef == 1 else [str(self.coef)]
        for atom, k in sorted(self.factors, key=lambda p: repr(p)):
            parts.append(repr(atom) if k == 1 else f"{atom!r}^{k}")
        return "*".join(parts)


class _Lattice(Expr):
    __slots__ = ("items",)
    pick = staticmethod(min)

    def __init__(self, items: frozenset):
        self.items = items

    def _key(self):
        return self.items

    def eval(self, theta: Fraction) -> Fraction:
        return self.pick(x.eval(theta) for x in self.items)

    def enclose(self, lo: Fraction, hi: Fraction) -> RatInterval:
        encs = [x.enclose(lo, hi) for x in self.items]
        return RatInterval(self.pick(e.lo for e in encs), self.pick(e.hi for e in encs))

    def __repr__(self) -> str:
        inner = ", ".join(sorted(repr(x) for x in self.items))
        return f"{type(self).__name__.lower()}({inner})"


class Min(_Lattice):
    __slots__ = ()
    pick = staticmethod(min)


class Max(_Lattice):
    __slots__ = ()
    pick = staticmethod(max)


class Apply(Expr):
    """``profile(arg(theta))`` with the argument known to lie in [0, 1]."""

    __slots__ = ("profile", "arg")

    def __init__(self, profile: PLHomeo01, arg: Expr):
        self.profile = profile
        self.arg = arg

    def _key(self):
        return (self.profile, self.arg)

    def eval(self, theta: Fraction) -> Fraction:
        return self.profile(self.arg.eval(theta))

    def enclose(self, lo: Fraction, hi: Fraction) -> RatInterval:
        e = self.arg.enclose(lo, hi)
        a = min(max(e.lo, Fraction(0)), Fraction(1))
        b = min(max(e.hi, Fraction(0)), Fraction(1))
        return RatInterval(self.profile(a), self.profile(b))

    def __repr__(self) -> str:
        return f"apply({self.profile!r}, {self.arg!r})"


# ---------------------------------------------------------------------------
# smart constructors


def const(v) -> Leaf:
    return Leaf(PLPeriodic.const(Q(v)))


def leaf(f: PLPeriodic) -> Leaf:
    return Leaf(f)


ONE = const(1)


def _monomial(x: Expr) -> tuple[Fraction, dict]:
    if isinstance(x, Leaf):
        c = x.f.points[0][1]
        if x.f.is_const:
            return c, {}
        # atoms are normalized to start at 1 so proportional leaves cancel
        return c, {x if c == 1 else Leaf(x.f.scale(1 / c)): 1}
    if isinstance(x, Prod):
        return x.coef, dict(x.factors)
    return Fraction(1), {x: 1}


def _from_monomial(coef: Fraction, factors: dict) -> Expr:
    factors = {a: k for a, k in factors.items() if k != 0}
    if not factors:
        return const(coef)
    if len(factors) == 1:
        (atom, k), = factors.items()
        if k == 1:
            if isinstance(atom, Leaf):
                return Leaf(atom.f.scale(coef))
            if coef == 1:
                return atom
    return Prod(coef, frozenset(factors.items()))


def mul(*xs: Expr) -> Expr:
    coef = Fraction(1)
    acc: dict = {}
    for x in xs:
        c, fs = _monomial(x)
        coef *= c
        for a, k in fs.items():
            acc[a] = acc.get(a, 0) + k
    return _from_monomial(coef, acc)


def inv(x: Expr) -> Expr:
    c, fs = _monomial(x)
    return _from_monomial(1 / c, {a: -k for a, k in fs.items()})


def div(a: Expr, b: Expr) -> Expr:
    return mul(a, inv(b))


def _lattice(cls, xs: Iterable[Expr], merge) -> Expr:
    items: set = set()
    pl = None
    for x in xs:
        members = x.items if isinstance(x, cls) else (x,)
        for m in members:
            if isinstance(m, Leaf):
                pl = m.f if pl is None else merge(pl, m.f)
            else:
                items.add(m)
    if pl is not None:
        items.add(Leaf(pl))
    if len(items) == 1:
        return next(iter(items))
    return cls(frozenset(items))


def rmin(*xs: Expr) -> Expr:
    return _lattice(Min, xs, pl_min)


def rmax(*xs: Expr) -> Expr:
    return _lattice(Max, xs, pl_max)


def papply(profile: PLHomeo01, x: Expr) -> Expr:
    if profile.is_identity:
        return x
    if isinstance(x, Leaf) and x.f.is_const:
        return const(profile(x.f.points[0][1]))
    if isinstance(x, Apply):
        return papply(x.profile.then(profile), x.arg)
    return Apply(profile, x)


@lru_cache(maxsize=65536)
def pullback(x: Expr, c: PLCircleMap) -> Expr:
    """theta -> x(c(theta))."""
    if c.is_identity:
        return x
    if isinstance(x, Leaf):
        return Leaf(x.f.pullback(c))
    if isinstance(x, Prod):
        return mul(const(x.coef), *(_pow(pullback(a, c), k) for a, k in x.factors))
    if isinstance(x, Min):
        return rmin(*(pullback(a, c) for a in x.items))
    if isinstance(x, Max):
        return rmax(*(pullback(a, c) for a in x.items))
    if isinstance(x, Apply):
        return papply(x.profile, pullback(x.arg, c))
    raise TypeError(type(x))


def _pow(x: Expr, k: int) -> Expr:
    base = x if k > 0 else inv(x)
    return mul(*([base] * abs(k)))


def size(x: Expr) -> int:
    """Rough node count, used to keep random generators in check."""
    if isinstance(x, Leaf):
        return len(x.f.points)
    if isinstance(x, Prod):
        return 1 + sum(size(a) for a, _ in x.factors)
    if isinstance(x, (Min, Max)):
        return 1 + sum(size(a) for a in x.items)
    return 1 + size(x.arg)
