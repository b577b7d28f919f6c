"""Auditable congruence derivations and scripted proof replays.

A congruence on this semigroup is never materialized.  A
:class:`CongruenceTrace` records finitely many pairs, each either a
hypothesis or derived from earlier pairs by multiplying on one side,
symmetry, transitivity, inversion (sound for congruences on inverse
semigroups), or rewriting a side by an identity that is checked in the
concrete semigroup.  :meth:`CongruenceTrace.replay` re-derives everything.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .geometry import (
    DEFAULT_BUDGET,
    PolarPoint,
    Star,
    circ_dist,
    star_ball,
    star_bump,
    star_equal,
    star_leq,
    star_rotate,
)
from .green import bicyclic_build, power
from .homeo import (
    Homeo,
    as_separable,
    ball_to_star,
    canonical_to_ball,
    compose,
    homeo_compare,
    identity_on,
    inverse,
    natural_leq,
    normalize,
    orthogonal,
    scaling,
    separable,
)
from .numerics import PLPeriodic, Q, fmt, pl_extrema, turn
from .tribool import TriBool


class RejectedStep(ValueError):
    def __init__(self, message: str, certificate: TriBool):
        super().__init__(message)
        self.certificate = certificate


class ReplayError(ValueError):
    pass


def eps(r) -> Homeo:
    """ε_r, the identity of the closed ball of radius r."""
    return identity_on(star_ball(r))


@dataclass
class Pair:
    a: Homeo
    b: Homeo
    step: int  # index into steps


class CongruenceTrace:
    """Append-only derivation of pairs in a congruence."""

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.pairs: list[Pair] = []
        self.steps: list[dict] = []

    # -- recording -----------------------------------------------------------

    def _push(self, a: Homeo, b: Homeo, step: dict) -> int:
        self.steps.append(step)
        self.pairs.append(Pair(a, b, len(self.steps) - 1))
        step["out"] = len(self.pairs) - 1
        return len(self.pairs) - 1

    def _equal(self, x: Homeo, y: Homeo, what: str) -> TriBool:
        v = homeo_compare(x, y, self.budget)
        if not v.is_true:
            raise RejectedStep(f"{what}: {x!r} ≠ {y!r} ({v.label()}, witness {v.witness})", v)
        return v

    def hypothesis(self, a: Homeo, b: Homeo, note: str = "") -> int:
        return self._push(a, b, {"kind": "Hypothesis", "a": a, "b": b, "note": note})

    def mul_left(self, c: Homeo, pid: int) -> int:
        p = self.pairs[pid]
        return self._push(compose(c, p.a), compose(c, p.b), {"kind": "MulLeft", "by": c, "in": pid})

    def mul_right(self, pid: int, d: Homeo) -> int:
        p = self.pairs[pid]
        return self._push(compose(p.a, d), compose(p.b, d), {"kind": "MulRight", "by": d, "in": pid})

    def symmetric(self, pid: int) -> int:
        p = self.pairs[pid]
        return self._push(p.b, p.a, {"kind": "Symmetric", "in": pid})

    def transitive(self, pid: int, qid: int) -> int:
        p, q = self.pairs[pid], self.pairs[qid]
        cert = self._equal(p.b, q.a, "transitivity junction")
        return self._push(p.a, q.b, {"kind": "Transitive", "in": (pid, qid), "cert": cert})

    def inverse_step(self, pid: int) -> int:
        p = self.pairs[pid]
        return self._push(inverse(p.a), inverse(p.b), {"kind": "Inverse", "in": pid})

    def rewrite(self, pid: int, left: Homeo | None = None, right: Homeo | None = None) -> int:
        p = self.pairs[pid]
        certs = {}
        a, b = p.a, p.b
        if left is not None:
            certs["left"] = self._equal(p.a, left, "left rewrite")
            a = left
        if right is not None:
            certs["right"] = self._equal(p.b, right, "right rewrite")
            b = right
        return self._push(a, b, {"kind": "IdentityRewrite", "in": pid, "left": left, "right": right, "cert": certs})

    def pair(self, pid: int) -> tuple[Homeo, Homeo]:
        return self.pairs[pid].a, self.pairs[pid].b

    def hypotheses(self) -> list[tuple[Homeo, Homeo]]:
        return [(s["a"], s["b"]) for s in self.steps if s["kind"] == "Hypothesis"]

    # -- audit ---------------------------------------------------------------

    def replay(self) -> bool:
        """Re-derive every pair from the hypotheses, re-checking certificates.

        Raises :class:`ReplayError` at the first step that does not reproduce.
        """
        fresh = CongruenceTrace(self.budget)
        for i, s in enumerate(self.steps):
            k = s["kind"]
            try:
                if k == "Hypothesis":
                    out = fresh.hypothesis(s["a"], s["b"])
                elif k == "MulLeft":
                    out = fresh.mul_left(s["by"], s["in"])
                elif k == "MulRight":
                    out = fresh.mul_right(s["in"], s["by"])
                elif k == "Symmetric":
                    out = fresh.symmetric(s["in"])
                elif k == "Transitive":
                    out = fresh.transitive(*s["in"])
                elif k == "Inverse":
                    out = fresh.inverse_step(s["in"])
                elif k == "IdentityRewrite":
                    out = fresh.rewrite(s["in"], s["left"], s["right"])
                else:
                    raise ReplayError(f"step {i}: unknown kind {k}")
            except RejectedStep as exc:
                raise ReplayError(f"step {i} ({k}) rejected: {exc}") from exc
            got, want = fresh.pairs[out], self.pairs[s["out"]]
            for side in ("a", "b"):
                v = homeo_compare(getattr(got, side), getattr(want, side), self.budget)
                if not v.is_true:
                    raise ReplayError(f"step {i} ({k}) does not reproduce side {side}")
        return True

    def describe(self, names: dict | None = None) -> list[str]:
        names = names or {}

        def nm(h):
            return names.get(h) or _short(h)

        lines = []
        for i, s in enumerate(self.steps):
            p = self.pairs[s["out"]]
            k = s["kind"]
            src = s.get("in", "")
            extra = ""
            if k in ("MulLeft", "MulRight"):
                extra = f" by {nm(s['by'])}"
            lines.append(f"[{s['out']}] {k}{'(' + str(src) + ')' if src != '' else ''}{extra}: {nm(p.a)} 𝔠 {nm(p.b)}")
        return lines


def trace_assert(t: CongruenceTrace, a: Homeo, b: Homeo) -> int:
    """Record (a, b) as a hypothesis; returns its pair id."""
    return t.hypothesis(a, b)


def trace_step(t: CongruenceTrace, op: tuple) -> int:
    """Apply one derivation step given as ``(kind, *args)``; returns the new pair id.

    Kinds and arguments: ``("MulLeft", c, pid)``, ``("MulRight", pid, d)``,
    ``("Symmetric", pid)``, ``("Transitive", pid, qid)``, ``("Inverse", pid)``,
    ``("IdentityRewrite", pid, left, right)``.
    """
    kind, *args = op
    table = {
        "MulLeft": t.mul_left,
        "MulRight": t.mul_right,
        "Symmetric": t.symmetric,
        "Transitive": t.transitive,
        "Inverse": t.inverse_step,
        "IdentityRewrite": t.rewrite,
    }
    if kind not in table:
        raise ValueError(f"unknown step kind {kind!r}")
    return table[kind](*args)


def star_label(S: Star) -> str:
    """Short stable label: ``B[r]`` for balls, a digest of the radial otherwise."""
    pl = S.pl
    if pl is not None and pl.is_const:
        return f"B[{fmt(pl.points[0][1])}]"
    return "S#" + hashlib.sha1(repr(S.radial).encode()).hexdigest()[:6]


def _short(h: Homeo) -> str:
    d, r = star_label(h.dom), star_label(h.ran)
    sep = as_separable(h)
    if sep is not None and sep.dir.is_identity and sep.profile.is_identity and sep.dom == sep.ran:
        return f"ε[{d[2:-1] if d.startswith('B[') else d}]"
    return f"({d}→{r})"


@dataclass
class ReplayReport:
    scenario: str
    case: str = ""
    identities: list = field(default_factory=list)  # (name, label, mode)
    info: dict = field(default_factory=dict)
    trace: CongruenceTrace | None = None
    verdict: str = "pass"

    def check(self, name: str, v: TriBool) -> TriBool:
        self.identities.append((name, v.label(), v.evidence.get("mode", "")))
        if not v.is_true:
            self.verdict = "fail"
        return v

    def require(self, name: str, cond: bool, detail: str = "") -> None:
        v = TriBool.true(mode="exact") if cond else TriBool.false(detail or name, mode="exact")
        self.check(name + (f" [{detail}]" if detail else ""), v)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "case": self.case,
            "verdict": self.verdict,
            "info": {k: _jsonable(v) for k, v in self.info.items()},
            "identities": [{"name": n, "verdict": l, "mode": m} for n, l, m in self.identities],
            "trace": self.trace.describe() if self.trace else [],
        }

    def to_text(self) -> str:
        lines = [f"replay {self.scenario}: {self.verdict.upper()}" + (f" (case {self.case})" if self.case else "")]
        for k, v in self.info.items():
            lines.append(f"  {k} = {_jsonable(v)}")
        for n, l, m in self.identities:
            lines.append(f"  [{l}{'/' + m if m else ''}] {n}")
        if self.trace:
            lines.append("  trace:")
            lines += ["    " + s for s in self.trace.describe()]
        return "\n".join(lines)


def _jsonable(v: Any):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return repr(v)


# ---------------------------------------------------------------------------
# collapsing all ball idempotents (bicyclic argument)


def _case_b(t: CongruenceTrace, rep: ReplayReport, pid: int, lo, hi, r) -> tuple[int, int]:
    """From ε_lo 𝔠 ε_hi and lo ≤ r ≤ hi derive ε_lo 𝔠 ε_r and ε_r 𝔠 ε_hi."""
    e_lo, e_hi, e_r = eps(lo), eps(hi), eps(r)
    rep.check(f"ε[{lo}] ≤ ε[{r}]", natural_leq(e_lo, e_r))
    rep.check(f"ε[{r}] ≤ ε[{hi}]", natural_leq(e_r, e_hi))
    p = t.mul_right(pid, e_r)
    p = t.rewrite(p, left=e_lo, right=e_r)
    q = t.transitive(t.symmetric(p), pid)
    return p, q


def minimal_exponent_below(q: Fraction, r: Fraction, start: Fraction = Fraction(1)) -> int:
    """Least n >= 1 with start * q**n < r (0 < q < 1)."""
    n = 1
    while start * q ** n >= r:
        n += 1
    return n


def minimal_exponent_above(q: Fraction, r: Fraction, start: Fraction) -> int:
    """Least n >= 1 with start * q**n > r (q > 1)."""
    n = 1
    while start * q ** n <= r:
        n += 1
    return n


def replay_lemma36(r1, r2, r, trace: CongruenceTrace | None = None, pid: int | None = None) -> ReplayReport:
    """All balls' identities fall into one class once ε_r1 𝔠 ε_r2 (r1 < r2).

    With an existing ``trace``, ``pid`` must name the pair (ε_r1, ε_r2).
    The report ends with a derived pair (ε_r, ε_r2).
    """
    r1, r2, r = Q(r1), Q(r2), Q(r)
    if not (0 < r1 < r2) or r <= 0 or r in (r1, r2):
        raise ValueError("need 0 < r1 < r2, r > 0 and r distinct from r1, r2")
    rep = ReplayReport("lemma36")
    rep.info.update(r1=r1, r2=r2, r=r)
    t = trace or CongruenceTrace()
    rep.trace = t
    if pid is None:
        pid = t.hypothesis(eps(r1), eps(r2), "ε_r1 𝔠 ε_r2")
    else:
        rep.check("hypothesis is (ε_r1, ε_r2)", homeo_compare(t.pairs[pid].a, eps(r1)) & homeo_compare(t.pairs[pid].b, eps(r2)))

    if r1 < r < r2:
        rep.case = "b"
        p, q = _case_b(t, rep, pid, r1, r2, r)
        rep.info["derived"] = [t.describe()[p].split(": ", 1)[1], t.describe()[q].split(": ", 1)[1]]
        rep.info["final_pair"] = q
        return rep

    if r < r1:
        rep.case = "a"
        ratio = r1 / r2
        n_r = minimal_exponent_below(ratio, r)
        rep.info["n_r"] = n_r
        rep.require("(r1/r2)^n_r < r", ratio ** n_r < r, f"{ratio ** n_r} < {r}")
        rep.require("minimality of n_r", n_r == 1 or ratio ** (n_r - 1) >= r)
        alpha, brep = bicyclic_build(r1, r2)
        for name, label, _ in brep.checks:
            rep.check(name, TriBool.true(mode="exact") if label == "True" else TriBool.false(name))
        ai = inverse(alpha)
        # idempotents (α⁻¹)^k α^k = ε[r2 (r1/r2)^k] of ⟨α, α⁻¹⟩
        k_r = minimal_exponent_below(ratio, r, r2)
        r0 = r2 * ratio ** k_r
        rep.info["k_r"] = k_r
        rep.info["r0"] = r0
        rep.check(f"(α⁻¹)^{k_r} α^{k_r} = ε[{r0}]", homeo_compare(compose(power(ai, k_r), power(alpha, k_r)), eps(r0)))
        chain = pid  # (ε[r2 q^0], ε[r2 q^1]) up to orientation
        step = t.symmetric(pid)  # (ε_r2, ε_r1)
        link = step
        acc = step
        for k in range(1, k_r):
            nxt = t.mul_right(t.mul_left(ai, link), alpha)
            nxt = t.rewrite(nxt, left=eps(r2 * ratio ** k), right=eps(r2 * ratio ** (k + 1)))
            acc = t.transitive(acc, nxt)
            link = nxt
        # acc: (ε_r2, ε_r0); bring to (ε_r0, ε_r1) for case b
        to_r1 = t.transitive(t.symmetric(acc), step)  # (ε_r0, ε_r1)
        del chain
        rep.check(f"ε[{r0}] ≤ ε[{r}] ≤ ε[{r1}]", natural_leq(eps(r0), eps(r)) & natural_leq(eps(r), eps(r1)))
        _, q = _case_b(t, rep, to_r1, r0, r1, r)  # (ε_r, ε_r1)
        final = t.transitive(q, pid)
        rep.info["final_pair"] = final
        return rep

    rep.case = "c"
    up = r2 / r1
    n_r = minimal_exponent_above(up, r, r2)
    R = [r2 * up ** k for k in range(n_r + 1)]
    rep.info["n_r"] = n_r
    rep.require("r2 (r2/r1)^n_r > r", R[n_r] > r, f"{R[n_r]} > {r}")
    rep.require("minimality of n_r", n_r == 1 or R[n_r - 1] <= r)
    beta = separable(star_ball(R[n_r]), star_ball(R[n_r - 1]))
    bi = inverse(beta)
    rep.info["dom_beta"] = R[n_r]
    rep.info["ran_beta"] = R[n_r - 1]
    e_top, e_next = eps(R[n_r]), eps(R[n_r - 1])
    rep.check("ε₁β = β", homeo_compare(compose(e_top, beta), beta))
    rep.check("βε₁ = β", homeo_compare(compose(beta, e_top), beta))
    rep.check("ε₁β⁻¹ = β⁻¹", homeo_compare(compose(e_top, bi), bi))
    rep.check("β⁻¹ε₁ = β⁻¹", homeo_compare(compose(bi, e_top), bi))
    rep.check("ββ⁻¹ = ε₁", homeo_compare(compose(beta, bi), e_top))
    rep.check("β⁻¹β = ε₂ ≠ ε₁", homeo_compare(compose(bi, beta), e_next))
    rep.check(
        f"(β⁻¹)^{n_r} β^{n_r} = ε_r2",
        homeo_compare(compose(power(bi, n_r), power(beta, n_r)), eps(r2)),
    )
    rep.check(
        f"(β⁻¹)^{n_r + 1} β^{n_r + 1} = ε_r1",
        homeo_compare(compose(power(bi, n_r + 1), power(beta, n_r + 1)), eps(r1)),
    )
    # conjugating by β multiplies ball radii by r2/r1
    link = pid  # (ε_r1, ε_r2) = (ε[R_-1], ε[R_0])
    acc = None
    for k in range(1, n_r + 1):
        nxt = t.mul_right(t.mul_left(beta, link), bi)
        nxt = t.rewrite(nxt, left=eps(R[k - 1]), right=eps(R[k]))
        acc = nxt if acc is None else t.transitive(acc, nxt)
        link = nxt
    rep.check(f"ε_r2 ≤ ε[{r}] ≤ ε[{R[n_r]}]", natural_leq(eps(r2), eps(r)) & natural_leq(eps(r), eps(R[n_r])))
    p, _ = _case_b(t, rep, acc, r2, R[n_r], r)  # (ε_r2, ε_r)
    final = t.symmetric(p)
    rep.info["final_pair"] = final
    return rep


# ---------------------------------------------------------------------------
# shrinking the unit ball by a rotation cover


def _pl_sublevel_arc(f: PLPeriodic, u0: Fraction) -> tuple[Fraction, Fraction] | None:
    """Maximal open arc (a, b) around u0 on which f < 1 (None: all of the circle)."""
    if max(f.values()) < 1:
        return None
    ts = f.breakpoints()

    def walk(sign):
        # follow breakpoints away from u0 until the value reaches 1
        pts = sorted(ts + [u0]) if u0 not in ts else sorted(ts)
        n = len(pts)
        i = pts.index(u0)
        x_prev, v_prev, acc = u0, f(u0), Fraction(0)
        for step in range(1, n + 1):
            j = (i + sign * step) % n
            x = pts[j]
            d = turn(sign * (x - x_prev)) or Fraction(1)
            v = f(x)
            if v >= 1:
                return acc + d * (1 - v_prev) / (v - v_prev)
            acc += d
            x_prev, v_prev = x, v
        raise AssertionError("no crossing found")

    left, right = walk(-1), walk(+1)
    return u0 - left, u0 + right


def _certified_arc(radial, u0: Fraction, budget: int) -> Fraction | None:
    """A large halfwidth h (multiple of 1/128) with radial < 1 certified on [u0-h, u0+h]."""
    for m in range(63, 0, -1):
        h = Fraction(m, 128)
        if _below_one(radial, u0 - h, u0 + h, depth=min(budget, 10)):
            return h
    return None


def _below_one(radial, a, b, depth) -> bool:
    arcs = [(a, b, 0)]
    while arcs:
        x, y, d = arcs.pop()
        if radial.enclose(x, y).hi < 1:
            continue
        if d >= depth or radial.eval(turn((x + y) / 2)) >= 1:
            return False
        m = (x + y) / 2
        arcs += [(x, m, d + 1), (m, y, d + 1)]
    return True


def replay_lemma37(
    s: Star,
    trace: CongruenceTrace | None = None,
    pid: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ReplayReport:
    """From ε₁ 𝔠 ε_s (s ⊆ B₁, somewhere strictly inside) derive ε₁ 𝔠 ε_R, R < 1."""
    rep = ReplayReport("lemma37")
    B1 = star_ball(1)
    e1, es = eps(1), identity_on(s)
    sub = star_leq(s, B1, budget)
    if not sub.is_true:
        raise ValueError(f"star is not inside the unit ball ({sub.label()})")
    exact = s.is_pl
    if exact:
        f = s.pl
        u0 = min(f.breakpoints(), key=lambda x: (f(x), x))
        if f(u0) >= 1:
            raise ValueError("no direction with radial value below 1")
        arc = _pl_sublevel_arc(f, u0)
    else:
        grid = [Fraction(k, 256) for k in range(256)]
        u0 = min(grid, key=lambda x: (s(x), x))
        if s(u0) >= 1:
            raise ValueError("no direction with radial value below 1")
        h = _certified_arc(s.radial, u0, budget)
        if h is None:
            rep.require("certified arc around u0", False, "budget exhausted")
            return rep
        arc = (u0 - h, u0 + h)
    rep.info["u0"] = turn(u0)
    rep.info["radial_u0"] = s(u0)
    if arc is None:
        k, w = 0, Fraction(1)
        rep.info["arc"] = "whole circle"
    else:
        a, b = arc
        w = b - a
        k = math.ceil((1 - w) / w) + 1
        rep.info["arc"] = [turn(a), turn(b)]
    rep.info["arc_width"] = w
    rep.info["k"] = k
    shifts = [Fraction(j, k + 1) for j in range(1, k + 1)]
    rep.info["shifts"] = shifts
    if k:
        rep.require("cover spacing below arc width", Fraction(1, k + 1) < w)

    t = trace or CongruenceTrace(budget)
    rep.trace = t
    if pid is None:
        pid = t.hypothesis(e1, es, "ε₁ 𝔠 ε_s")
    else:
        rep.check("hypothesis is (ε₁, ε_s)", homeo_compare(t.pairs[pid].a, e1) & homeo_compare(t.pairs[pid].b, es))

    # ε₁ 𝔠 α⁻¹ ε_s α for every cover rotation
    conj_pairs = []
    conjs = []
    for x in shifts:
        al = orthogonal(x)
        ai = inverse(al)
        rep.check(f"α⁻¹ε₁α = ε₁ (shift {x})", homeo_compare(compose(compose(ai, e1), al), e1))
        p = t.mul_right(t.mul_left(ai, pid), al)
        c = compose(compose(ai, es), al)
        rep.check(f"α⁻¹ε_sα = ε of rotated s (shift {x})", homeo_compare(c, identity_on(star_rotate(s, x)), budget))
        p = t.rewrite(p, left=e1)
        conj_pairs.append(p)
        conjs.append(c)

    phi = es
    acc = pid
    for c, p in zip(conjs, conj_pairs):
        q = t.rewrite(t.mul_left(phi, p), left=phi)  # (φ, φ c)
        phi = compose(phi, c)
        acc = t.transitive(acc, q)
    dom_phi = phi.dom
    rep.info["dom_phi_is_pl"] = dom_phi.is_pl
    if exact:
        rep.require("dom φ is exactly PL", dom_phi.is_pl)
    for x, c in zip(shifts, conjs):
        rep.check(f"dom φ ⊆ rotated s (shift {x})", star_leq(dom_phi, c.dom, budget))
    rep.check("dom φ ⊆ s", star_leq(dom_phi, s, budget))

    if dom_phi.is_pl:
        ext = pl_extrema(dom_phi.pl)
        R = ext.max.hi
        brute = max(dom_phi.pl.values())
        rep.require("R_φ equals the breakpoint maximum", R == brute, f"R_φ = {R}")
    else:
        ext = pl_extrema(dom_phi.radial, width=Fraction(1, 1000), budget=budget)
        # any rational upper bound works; round up to a short one
        R = Fraction(math.ceil(ext.max.hi * 64), 64)
        if R >= 1:
            R = ext.max.hi
        rep.info["R_phi_enclosure"] = [ext.max.lo, ext.max.hi]
    rep.info["R_phi"] = R
    rep.require("max ρ_dom φ < 1", R < 1, f"R_φ = {R}")
    eR = eps(R)
    rep.check("ε_Rφ · φ = φ", homeo_compare(compose(eR, phi), phi, budget))
    rep.check("ε_Rφ · ε₁ = ε_Rφ", homeo_compare(compose(eR, e1), eR, budget))
    q = t.rewrite(t.mul_left(eR, acc), left=eR, right=phi)  # (ε_R, φ)
    final = t.transitive(acc, t.symmetric(q))  # (ε₁, ε_R)
    rep.info["final_pair"] = final
    rep.phi = phi
    return rep


# ---------------------------------------------------------------------------
# from a non-identity self-map of the unit ball to distinct idempotents


def _conjugate_idempotents(t: CongruenceTrace, pid: int) -> int:
    """From (e, b) with e idempotent derive (e, b⁻¹b)."""
    e, b = t.pair(pid)
    inv_pair = t.rewrite(t.inverse_step(pid), left=e)  # (e, b⁻¹)
    right = t.mul_right(inv_pair, b)  # (e b, b⁻¹ b)
    right = t.rewrite(right, left=b)  # needs e b = b
    return t.transitive(pid, right)


def _to_unit_ball(t: CongruenceTrace, rep: ReplayReport, pid: int) -> tuple[int, Star]:
    """From distinct 𝔠-related idempotents reach (ε₁, ε_s) with s ⊊ B₁."""
    e, f = t.pair(pid)
    if star_leq(f.dom, e.dom, 0).is_true:
        pid = t.symmetric(pid)
        e, f = f, e
    p = t.rewrite(t.mul_right(pid, f), right=f)  # (ef, f), ef ≤ f
    eps_small = t.pair(p)[0]
    iota = f
    alpha = canonical_to_ball(iota.dom)
    ai = inverse(alpha)
    p = t.mul_right(t.mul_left(ai, p), alpha)
    s = compose(compose(ai, eps_small), alpha).dom
    rep.check("α_ι⁻¹ ι α_ι = ε₁", homeo_compare(compose(compose(ai, iota), alpha), eps(1)))
    p = t.rewrite(p, left=identity_on(s), right=eps(1))
    return t.symmetric(p), s


def _moved_direction(dir_map) -> Fraction | None:
    cands = [Fraction(0)] + dir_map.breakpoints()
    cands += [Fraction(k, 64) for k in range(64)]
    for x in cands:
        if dir_map(x) != turn(x):
            return turn(x)
    return None


def replay_theorem38(gamma: Homeo, budget: int = DEFAULT_BUDGET, chain: bool = True) -> ReplayReport:
    """Constructive core: from ε₁ 𝔠 γ (γ ≠ ε₁ a self-map of B₁) produce two
    distinct 𝔠-equivalent idempotents, then continue into :func:`replay_lemma37`."""
    rep = ReplayReport("theorem38")
    B1 = star_ball(1)
    e1 = eps(1)
    if not (star_equal(gamma.dom, B1, budget).is_true and star_equal(gamma.ran, B1, budget).is_true):
        raise ValueError("γ must map the unit ball onto itself")
    diff = homeo_compare(gamma, e1, budget)
    if not diff.is_false:
        raise ValueError(f"γ must differ from ε₁ ({diff.label()})")
    rep.info["nonidentity_witness"] = diff.witness

    sep = as_separable(normalize(gamma))
    if sep is None:
        rep.case = "unknown"
        rep.require("classification", False, "normal form hides the direction map")
        return rep
    t = CongruenceTrace(budget)
    rep.trace = t
    hyp = t.hypothesis(e1, gamma, "ε₁ 𝔠 γ")
    gi = inverse(gamma)

    moved = _moved_direction(sep.dir)
    if moved is None:
        rep.case = "a"
        P = sep.profile
        y_s = next(x for x, v in P.points if x != v)
        y = PolarPoint(0, y_s)
        gy = gamma(y)
        rep.info["y"] = y
        rep.info["gamma_y"] = gy
        rep.require("ray [0,x] invariant", gy.theta == y.theta)
        rep.require("y moved", gy != y, f"{y} ↦ {gy}")
        ey = eps(y.s)  # maximal ball through y
        rep.info["B_y"] = y.s
        conj = compose(compose(gi, ey), gamma)
        p = t.rewrite(t.mul_left(ey, hyp), left=ey)  # (ε_y, ε_y γ)
        p = _conjugate_idempotents(t, p)  # (ε_y, (ε_yγ)⁻¹ ε_yγ)
        p = t.rewrite(p, right=conj)
        if gy.s > y.s:
            w, inside, outside = gy, conj, ey
        else:
            w, inside, outside = y, ey, conj
        rep.require("witness in one domain only", inside.dom.contains(w) and not outside.dom.contains(w), f"witness {w}")
        rep.check("γ⁻¹ε_yγ is idempotent", _idem(conj, budget))
        distinct = homeo_compare(ey, conj, budget)
        rep.require("ε_y ≠ γ⁻¹ε_yγ", distinct.is_false)
    else:
        rep.case = "b"
        x = moved
        xg = sep.dir(x)
        hw = min(circ_dist(x, xg) / 2, Fraction(1, 8))
        L = star_bump(B1, xg, hw, 1)
        beta = ball_to_star(L)
        bi = inverse(beta)
        rep.info.update(x=x, gamma_x=xg, bump_halfwidth=hw)
        rep.require("bump vanishes at x", L(x) == 1, f"ρ_L(x) = {L(x)}")
        rep.require("bump is 2 at (x)γ", L(xg) == 2, f"ρ_L((x)γ) = {L(xg)}")
        lit_a = compose(bi, beta)
        lit_b = compose(compose(compose(bi, gi), gamma), beta)
        lit = homeo_compare(lit_a, lit_b, budget)
        rep.info["literal_pair_equal"] = lit.is_true  # γ⁻¹γ = ε₁ makes the two coincide
        delta = compose(compose(bi, gamma), beta)
        p = t.rewrite(t.mul_right(t.mul_left(bi, hyp), beta), left=identity_on(L))  # (ε_L, δ)
        p = t.rewrite(t.mul_left(e1, p), left=e1)  # (ε₁, ε₁δ)
        p = _conjugate_idempotents(t, p)
        other = t.pair(p)[1]
        rep.check("second idempotent is idempotent", _idem(other, budget))
        v1, v2 = e1.dom(xg), other.dom(xg)
        rep.info["witness_values"] = [v1, v2]
        rep.require("witness radial values 1 vs 2 at the bump direction", (v1, v2) == (1, 2), f"{v1} vs {v2}")
        distinct = homeo_compare(e1, other, budget)
        rep.require("ε₁ ≠ δ⁻¹ε₁δ", distinct.is_false)
    rep.info["idempotent_pair"] = p
    if chain:
        q, s = _to_unit_ball(t, rep, p)
        sub = replay_lemma37(s, t, q, budget)
        rep.identities += [("lemma37: " + n, l, m) for n, l, m in sub.identities]
        if not sub.passed:
            rep.verdict = "fail"
        rep.info["lemma37"] = {k: v for k, v in sub.info.items() if k not in ("shifts",)}
        R = sub.info.get("R_phi")
        if R is not None and R < 1 and "final_pair" in sub.info:
            sym = t.symmetric(sub.info["final_pair"])  # (ε_R, ε₁)
            sub36 = replay_lemma36(R, 1, 2, t, sym)
            rep.identities += [("lemma36: " + n, l, m) for n, l, m in sub36.identities]
            if not sub36.passed:
                rep.verdict = "fail"
    try:
        t.replay()
        rep.require("trace replays soundly", True)
    except ReplayError as exc:
        rep.require("trace replays soundly", False, str(exc))
    return rep


def _idem(h: Homeo, budget: int) -> TriBool:
    from .homeo import is_idempotent

    return is_idempotent(h, budget)
