"""Green's relations, D-class witnesses and bicyclic submonoids."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import DEFAULT_BUDGET, star_ball, star_equal
from .homeo import (
    Homeo,
    compose,
    homeo_compare,
    identity_on,
    inverse,
    is_idempotent,
    scaling,
    separable,
)
from .numerics import Q
from .tribool import TriBool

RELATIONS = ("R", "L", "H", "D", "J")


@dataclass(frozen=True)
class GreenVerdict:
    relation: str
    verdict: TriBool
    witness: tuple | None = None  # (u, v) chain for D and J


def green_relation(rel: str, h1: Homeo, h2: Homeo, budget: int = DEFAULT_BUDGET) -> GreenVerdict:
    """R: equal ranges; L: equal domains; H: both.  D and J always hold, and
    come back with a connecting element u, ``h1 L u R h2``, checked here."""
    rel = rel.upper()
    if rel == "R":
        return GreenVerdict(rel, star_equal(h1.ran, h2.ran, budget))
    if rel == "L":
        return GreenVerdict(rel, star_equal(h1.dom, h2.dom, budget))
    if rel == "H":
        return GreenVerdict(rel, star_equal(h1.ran, h2.ran, budget) & star_equal(h1.dom, h2.dom, budget))
    if rel in ("D", "J"):
        u = separable(h1.dom, h2.ran)
        left = star_equal(h1.dom, u.dom, budget)
        right = star_equal(u.ran, h2.ran, budget)
        return GreenVerdict(rel, left & right, (u, h2))
    raise ValueError(f"unknown Green relation {rel!r}")


class NotIdempotent(ValueError):
    pass


def d_witness(e: Homeo, f: Homeo, budget: int = DEFAULT_BUDGET) -> Homeo:
    """α with αα⁻¹ = e and α⁻¹α = f, for idempotents e and f."""
    for name, x in (("e", e), ("f", f)):
        v = is_idempotent(x, budget)
        if not v.is_true:
            raise NotIdempotent(f"{name} is not an idempotent ({v.label()})")
    alpha = separable(e.dom, f.dom)
    left = homeo_compare(compose(alpha, inverse(alpha)), e, budget)
    right = homeo_compare(compose(inverse(alpha), alpha), f, budget)
    if not (left.is_true and right.is_true):
        raise AssertionError(f"identities αα⁻¹ = e, α⁻¹α = f failed: {left.label()}, {right.label()}")
    return alpha


@dataclass
class Report:
    ok: bool = True
    checks: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    def add(self, name: str, verdict: TriBool, detail: str = "") -> None:
        self.checks.append((name, verdict.label(), detail))
        if not verdict.is_true:
            self.ok = False


def subgroup_check(e: Homeo, members: list, budget: int = DEFAULT_BUDGET) -> Report:
    """Sampled closure of the maximal subgroup H_e.

    Every member must be H-related to ``e``; products and inverses must stay
    in H_e, ``e`` must act as identity and hh⁻¹ must return ``e``.  Only the
    given sample is examined, the group itself is far too large to list.
    """
    rep = Report()
    S = e.dom

    def in_h(h) -> TriBool:
        return star_equal(h.dom, S, budget) & star_equal(h.ran, S, budget)

    rep.add("e idempotent", is_idempotent(e, budget))
    for i, h in enumerate(members):
        rep.add(f"#{i} in H_e", in_h(h))
        rep.add(f"#{i} e·h = h·e = h", homeo_compare(compose(e, h), h, budget) & homeo_compare(compose(h, e), h, budget))
        rep.add(f"#{i} h·h⁻¹ = e", homeo_compare(compose(h, inverse(h)), e, budget))
        rep.add(f"#{i} h⁻¹ in H_e", in_h(inverse(h)))
        for j, g in enumerate(members):
            rep.add(f"#{i}·#{j} in H_e", in_h(compose(h, g)))
    return rep


# ---------------------------------------------------------------------------
# bicyclic monoid


@dataclass(frozen=True, order=True)
class BicyclicWord:
    """q^i p^j, standing for (α⁻¹)^i α^j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ValueError("exponents must be non-negative")

    def __mul__(self, other: BicyclicWord) -> BicyclicWord:
        return bicyclic_product(self, other)


def bicyclic_product(a: BicyclicWord, b: BicyclicWord) -> BicyclicWord:
    """q^i p^j · q^k p^l = q^(i+m-j) p^(l+m-k) with m = max(j, k); pure integer arithmetic."""
    m = max(a.j, b.i)
    return BicyclicWord(a.i + m - a.j, b.j + m - b.i)


def power(h: Homeo, n: int) -> Homeo:
    if n < 1:
        raise ValueError("power needs n >= 1")
    out = h
    for _ in range(n - 1):
        out = compose(out, h)
    return out


def word_element(alpha: Homeo, w: BicyclicWord) -> Homeo:
    e = compose(alpha, inverse(alpha))  # the identity of ⟨α, α⁻¹⟩
    parts = []
    if w.i:
        parts.append(power(inverse(alpha), w.i))
    if w.j:
        parts.append(power(alpha, w.j))
    if not parts:
        return e
    out = parts[0]
    for p in parts[1:]:
        out = compose(out, p)
    return out


def bicyclic_build(r1, r2) -> tuple[Homeo, Report]:
    """α = scaling B_{r2} → B_{r1} and its four defining relations."""
    r1, r2 = Q(r1), Q(r2)
    if not 0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    alpha = scaling(r2, r1)
    ai = inverse(alpha)
    e1, e2 = identity_on(star_ball(r1)), identity_on(star_ball(r2))
    rep = Report()
    rep.add("ε_r2·α = α", homeo_compare(compose(e2, alpha), alpha))
    rep.add("α·ε_r2 = α", homeo_compare(compose(alpha, e2), alpha))
    rep.add("ε_r2·α⁻¹ = α⁻¹", homeo_compare(compose(e2, ai), ai))
    rep.add("α⁻¹·ε_r2 = α⁻¹", homeo_compare(compose(ai, e2), ai))
    rep.add("α·α⁻¹ = ε_r2", homeo_compare(compose(alpha, ai), e2))
    rep.add("α⁻¹·α = ε_r1", homeo_compare(compose(ai, alpha), e1))
    distinct = homeo_compare(e1, e2)
    ok = TriBool.true(mode="exact") if distinct.is_false else TriBool.false("ε_r1 = ε_r2")
    rep.add("ε_r1 ≠ ε_r2", ok, f"radial {e1.dom(0)} vs {e2.dom(0)}")
    return alpha, rep


def bicyclic_nf_check(alpha: Homeo, i_max: int = 3, j_max: int = 3) -> Report:
    words = [BicyclicWord(i, j) for i in range(i_max + 1) for j in range(j_max + 1)]
    elems = {w: word_element(alpha, w) for w in words}
    rep = Report()
    keys = {}
    for w, h in elems.items():
        key = (h.dom(0), h.ran(0))
        if key in keys:
            rep.add(f"distinct {w}", TriBool.false(keys[key]), f"same endpoints as {keys[key]}")
        keys[key] = w
    rep.add("normal forms distinct", TriBool.true(mode="exact") if len(keys) == len(words) else TriBool.false("collision"))
    mismatches = []
    cache: dict = {}
    for a in words:
        for b in words:
            prod = compose(elems[a], elems[b])
            expected = bicyclic_product(a, b)
            if expected not in cache:
                cache[expected] = word_element(alpha, expected)
            v = homeo_compare(prod, cache[expected])
            if not v.is_true:
                mismatches.append((a, b, expected, v.label()))
    rep.mismatches = mismatches
    rep.add(
        "multiplication table",
        TriBool.true(mode="exact", pairs=len(words) ** 2) if not mismatches else TriBool.false(mismatches[0]),
        f"{len(words) ** 2} products, {len(mismatches)} mismatches",
    )
    return rep
