"""Seeded property batteries over random elements and stars.

Each battery returns a :class:`BatteryResult` tallying verdicts; a battery
passes when there is no False and no Unknown.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .geometry import DEFAULT_BUDGET, star_compare, star_intersect
from .green import NotIdempotent, d_witness, green_relation
from .homeo import compose, homeo_compare, identity_on, inverse, natural_leq, restrict, separable
from .samplers import random_element, random_star
from .tribool import TriBool


@dataclass
class BatteryResult:
    name: str
    total: int = 0
    tally: Counter = field(default_factory=Counter)  # (label, mode) -> count
    failures: list = field(default_factory=list)

    def record(self, case: str, v: TriBool) -> None:
        self.total += 1
        self.tally[(v.label(), v.evidence.get("mode", ""))] += 1
        if not v.is_true and len(self.failures) < 5:
            self.failures.append((case, v.label(), v.witness))

    @property
    def passed(self) -> bool:
        return self.total > 0 and all(label == "True" for label, _ in self.tally)

    def summary(self) -> str:
        parts = ", ".join(f"{label}/{mode or '-'}={n}" for (label, mode), n in sorted(self.tally.items()))
        return f"{self.name}: {self.total} verdicts ({parts})"


def _agree(expected: bool, got: TriBool, witness="disagreement") -> TriBool:
    if got.is_unknown:
        return got
    if got.is_true == expected:
        return TriBool.true(mode=got.evidence.get("mode", "exact"))
    return TriBool.false(witness, mode="exact")


def axioms_battery(n: int = 200, depth: int = 3, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BatteryResult:
    """h h⁻¹ h = h and commuting idempotents on random composites."""
    rng = random.Random(seed)
    res = BatteryResult("inverse-semigroup axioms")
    for i in range(n):
        h = random_element(rng, depth)
        g = random_element(rng, depth)
        res.record(f"#{i} hh⁻¹h", homeo_compare(compose(compose(h, inverse(h)), h), h, budget))
        e, f = compose(h, inverse(h)), compose(inverse(g), g)
        res.record(f"#{i} ef=fe", homeo_compare(compose(e, f), compose(f, e), budget))
    return res


def band_battery(n: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BatteryResult:
    """id_S id_T = id_{S∩T}, and the natural order matches star inclusion."""
    rng = random.Random(seed)
    res = BatteryResult("idempotent band")
    for i in range(n):
        S, T = random_star(rng), random_star(rng)
        if i % 3 == 1:
            T = star_intersect(S, T)  # nested pairs exercise the order
        elif i % 3 == 2:
            S = star_intersect(S, T)
        eS, eT = identity_on(S), identity_on(T)
        v = homeo_compare(compose(eS, eT), identity_on(star_intersect(S, T)), budget)
        res.record(f"#{i} product", v if v.evidence.get("mode") == "exact" or not v.is_true else TriBool.false("not exact"))
        rel = star_compare(S, T, budget).relation
        res.record(f"#{i} order", _agree(rel in ("Equal", "ProperSubset"), natural_leq(eS, eT, budget), (S, T)))
    return res


def _endpoint_oracle(rel: str, h1, h2) -> bool:
    from .geometry import star_equal

    same_dom = star_equal(h1.dom, h2.dom).is_true
    same_ran = star_equal(h1.ran, h2.ran).is_true
    return {"R": same_ran, "L": same_dom, "H": same_dom and same_ran, "D": True, "J": True}[rel]


def green_pairs(rng: random.Random, n: int) -> list[tuple]:
    """Independent pairs, pairs forced to share the range, pairs sharing the domain."""
    pairs = []
    for i in range(n):
        h1 = separable(random_star(rng), random_star(rng))
        if rng.random() < 0.5:
            h1 = restrict(h1, random_star(rng))
        kind = i % 3
        if kind == 0:
            h2 = separable(random_star(rng), random_star(rng))
        elif kind == 1:
            # a D-witness onto dom h1 followed by h1 keeps the range
            h2 = compose(d_witness(identity_on(random_star(rng)), identity_on(h1.dom)), h1)
        else:
            h2 = compose(h1, separable(h1.ran, random_star(rng)))
        pairs.append((h1, h2))
    return pairs


def green_battery(n: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BatteryResult:
    rng = random.Random(seed)
    res = BatteryResult("Green's relations")
    for i, (h1, h2) in enumerate(green_pairs(rng, n)):
        for rel in ("R", "L", "H", "D", "J"):
            gv = green_relation(rel, h1, h2, budget)
            res.record(f"#{i} {rel}", _agree(_endpoint_oracle(rel, h1, h2), gv.verdict))
    return res


def bisimple_battery(n: int = 50, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BatteryResult:
    rng = random.Random(seed)
    res = BatteryResult("D-class witnesses")
    for i in range(n):
        e, f = identity_on(random_star(rng)), identity_on(random_star(rng))
        try:
            a = d_witness(e, f, budget)
        except (NotIdempotent, AssertionError) as exc:
            res.record(f"#{i}", TriBool.false(str(exc)))
            continue
        res.record(f"#{i} αα⁻¹", homeo_compare(compose(a, inverse(a)), e, budget))
        res.record(f"#{i} α⁻¹α", homeo_compare(compose(inverse(a), a), f, budget))
    return res


BATTERIES = {
    "axioms": axioms_battery,
    "band": band_battery,
    "green": green_battery,
    "bisimple": bisimple_battery,
}
