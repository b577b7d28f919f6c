"""Scene files: named stars, elements, checks and replays in JSON.

Definitions are small Python-like expressions (parsed with :mod:`ast`, never
evaluated by Python) over a fixed vocabulary of constructors.  Rationals are
written as strings ``"p/q"``, integers, or integer quotients; floats are
rejected.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import battery as bat
from .congruence import ReplayReport, replay_lemma36, replay_lemma37, replay_theorem38
from .geometry import (
    DEFAULT_BUDGET,
    PolarPoint,
    Star,
    star_ball,
    star_bump,
    star_compare,
    star_equal,
    star_from_profile,
    star_intersect,
    star_leq,
    star_rotate,
)
from .green import bicyclic_build, bicyclic_nf_check, d_witness, green_relation
from .homeo import (
    Homeo,
    ball_to_star,
    canonical_to_ball,
    compose,
    homeo_compare,
    identity_on,
    inverse,
    is_idempotent,
    natural_leq,
    orthogonal,
    preset,
    restrict,
    scaling,
    separable,
)
from .numerics import PLCircleMap, PLHomeo01, Q, fmt
from .tribool import TriBool


class SceneError(ValueError):
    """Parse or validation failure; ``where`` names the definition or position."""

    def __init__(self, message: str, where: str = "", line: int | None = None, col: int | None = None):
        self.where, self.line, self.col = where, line, col
        loc = where
        if line is not None:
            loc = f"{where + ' ' if where else ''}line {line}, column {col}"
        super().__init__(f"{loc}: {message}" if loc else message)


SECTIONS = ("stars", "elements", "checks", "replays")
SCENARIOS = {
    "lemma36": ("r1", "r2", "r"),
    "lemma37": ("star",),
    "theorem38": ("element",),
}


@dataclass
class Scene:
    stars: dict[str, str] = field(default_factory=dict)
    elements: dict[str, str] = field(default_factory=dict)
    checks: dict[str, str] = field(default_factory=dict)
    replays: dict[str, dict] = field(default_factory=dict)
    objects: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "stars": dict(self.stars),
            "elements": dict(self.elements),
            "checks": dict(self.checks),
            "replays": {k: dict(v) for k, v in self.replays.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# expression evaluation


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return Q(v)
    raise TypeError(f"expected a rational, got {v!r}")


def _points(pts) -> list:
    return [(_rat(a), _rat(b)) for a, b in pts]


def _star(S) -> Star:
    if not isinstance(S, Star):
        raise TypeError(f"expected a star, got {type(S).__name__}")
    return S


def _elem(h) -> Homeo:
    if not isinstance(h, Homeo):
        raise TypeError(f"expected an element, got {type(h).__name__}")
    return h


def _compose_all(*hs):
    out = _elem(hs[0])
    for h in hs[1:]:
        out = compose(out, _elem(h))
    return out


BUILDERS: dict[str, Callable] = {
    # stars
    "ball": lambda r: star_ball(_rat(r)),
    "star": lambda pts: star_from_profile(_points(pts)),
    "bump": lambda base, c, hw, h: star_bump(_star(base), _rat(c), _rat(hw), _rat(h)),
    "intersect": lambda *ss: _fold_intersect([_star(s) for s in ss]),
    "rotate": lambda S, t: star_rotate(_star(S), _rat(t)),
    "dom": lambda h: _elem(h).dom,
    "ran": lambda h: _elem(h).ran,
    # PL data
    "homeo01": lambda pts: PLHomeo01(_points(pts)),
    "circle_map": lambda pts, deg=1: PLCircleMap(_points(pts), int(deg)),
    "rotation": lambda t: PLCircleMap.rotation(_rat(t)),
    "reflection": lambda axis=0: PLCircleMap.reflection(_rat(axis)),
    # elements
    "separable": lambda S, T, dir=None, profile=None: separable(_star(S), _star(T), dir, profile),
    "identity_on": lambda S: identity_on(_star(S)),
    "scaling": lambda a, b: scaling(_rat(a), _rat(b)),
    "orthogonal": lambda t, flip=False: orthogonal(_rat(t), bool(flip)),
    "ball_to_star": lambda S: ball_to_star(_star(S)),
    "canonical_to_ball": lambda S: canonical_to_ball(_star(S)),
    "compose": _compose_all,
    "inverse": lambda h: inverse(_elem(h)),
    "restrict": lambda h, S: restrict(_elem(h), _star(S)),
    "preset": lambda kind, *args: preset(kind, *(_rat(a) for a in args)),
}


def _fold_intersect(ss: list[Star]) -> Star:
    out = ss[0]
    for s in ss[1:]:
        out = star_intersect(out, s)
    return out


@dataclass
class CheckResult:
    verdict: TriBool
    detail: str = ""


def _negate(v: TriBool, what: str) -> TriBool:
    if v.is_false:
        return TriBool.true(mode=v.evidence.get("mode", "exact"), witness=v.witness)
    if v.is_true:
        return TriBool.false(what, mode=v.evidence.get("mode", "exact"))
    return v


def _describe_witness(a: Homeo, b: Homeo, v: TriBool) -> str:
    w = v.witness
    if not isinstance(w, PolarPoint):
        return ""
    if v.evidence.get("part") == "domain":
        return f"witness {w}: domain radial {fmt(a.dom(w.theta))} vs {fmt(b.dom(w.theta))}"
    return f"witness {w}"


def _check_builders(ctx: "RunContext") -> dict[str, Callable]:
    b = ctx.budget

    def equal(x, y):
        v = homeo_compare(_elem(x), _elem(y), b)
        return CheckResult(v, _describe_witness(x, y, v) if v.is_false else "")

    def distinct(x, y):
        v = homeo_compare(_elem(x), _elem(y), b)
        return CheckResult(_negate(v, "elements coincide"), _describe_witness(x, y, v) if v.is_false else "")

    def idempotent(x):
        return CheckResult(is_idempotent(_elem(x), b))

    def not_idempotent(x):
        v = is_idempotent(_elem(x), b)
        return CheckResult(_negate(v, "is idempotent"), f"witness {v.witness}" if v.is_false else "")

    def leq(x, y):
        return CheckResult(natural_leq(_elem(x), _elem(y), b))

    def green(rel, x, y):
        return CheckResult(green_relation(str(rel), _elem(x), _elem(y), b).verdict)

    def not_green(rel, x, y):
        return CheckResult(_negate(green_relation(str(rel), _elem(x), _elem(y), b).verdict, f"{rel} holds"))

    def stars_equal(S, T):
        v = star_equal(_star(S), _star(T), b)
        detail = f"witness direction {v.witness}: {fmt(S(v.witness))} vs {fmt(T(v.witness))}" if v.is_false else ""
        return CheckResult(v, detail)

    def subset(S, T):
        return CheckResult(star_leq(_star(S), _star(T), b))

    def relation(S, T, expected):
        rel = star_compare(_star(S), _star(T), b).relation
        ok = rel == expected
        v = TriBool.true(mode="exact") if ok else (TriBool.unknown() if rel == "Unknown" else TriBool.false(rel))
        return CheckResult(v, f"relation {rel}")

    def contains(S, theta, s):
        p = PolarPoint(_rat(theta), _rat(s))
        ok = _star(S).contains(p)
        return CheckResult(TriBool.true(mode="exact") if ok else TriBool.false(p), f"radial {fmt(S(p.theta))}")

    def radial(S, theta, value):
        got = _star(S)(_rat(theta))
        ok = got == _rat(value)
        return CheckResult(TriBool.true(mode="exact") if ok else TriBool.false(got), f"value {fmt(got)}")

    def maps(h, theta, s, theta2, s2):
        img = _elem(h)(PolarPoint(_rat(theta), _rat(s)))
        want = PolarPoint(_rat(theta2), _rat(s2))
        return CheckResult(TriBool.true(mode="exact") if img == want else TriBool.false(img), f"image {img}")

    def axioms(h):
        h = _elem(h)
        return CheckResult(homeo_compare(compose(compose(h, inverse(h)), h), h, b))

    def dwit(e, f):
        try:
            a = d_witness(_elem(e), _elem(f), b)
        except ValueError as exc:
            return CheckResult(TriBool.false(str(exc)), str(exc))
        return CheckResult(TriBool.true(mode="exact"), f"alpha = {a!r}")

    def bicyclic(r1, r2):
        alpha, rep = bicyclic_build(_rat(r1), _rat(r2))
        nf = bicyclic_nf_check(alpha)
        ok = rep.ok and nf.ok
        detail = f"{len(rep.checks)} relations, {nf.checks[-1][2]}"
        return CheckResult(TriBool.true(mode="exact") if ok else TriBool.false(detail), detail)

    def battery(name, n=None, depth=None):
        fn = bat.BATTERIES[str(name)]
        kw: dict = {"seed": ctx.seed, "budget": b}
        if n is not None:
            kw["n"] = int(n)
        if depth is not None:
            kw["depth"] = int(depth)
        res = fn(**kw)
        if res.passed:
            v = TriBool.true(mode="exact" if all(m == "exact" for _, m in res.tally) else "rays")
        elif any(label == "False" for label, _ in res.tally):
            v = TriBool.false(res.failures[0])
        else:
            v = TriBool.unknown(mode="budget")
        return CheckResult(v, res.summary())

    return {
        "equal": equal,
        "distinct": distinct,
        "idempotent": idempotent,
        "not_idempotent": not_idempotent,
        "leq": leq,
        "green": green,
        "not_green": not_green,
        "stars_equal": stars_equal,
        "subset": subset,
        "relation": relation,
        "contains": contains,
        "radial": radial,
        "maps": maps,
        "axioms": axioms,
        "d_witness": dwit,
        "bicyclic": bicyclic,
        "battery": battery,
    }


CHECKS = (
    "equal", "distinct", "idempotent", "not_idempotent", "leq", "green", "not_green", "stars_equal",
    "subset", "relation", "contains", "radial", "maps", "axioms", "d_witness", "bicyclic", "battery",
)


def _parse_expr(src: str, where: str) -> ast.expr:
    if not isinstance(src, str):
        raise SceneError("definition must be an expression string", where)
    try:
        return ast.parse(src, mode="eval").body
    except SyntaxError as exc:
        raise SceneError(f"syntax error: {exc.msg}", where, exc.lineno, exc.offset) from None


def _walk_names(node: ast.expr, funcs: set, names: set, where: str) -> None:
    """Static validation: only known calls, known names and literals."""
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in funcs:
            raise SceneError(f"unknown function {ast.unparse(node.func)!r}", where)
        for a in node.args:
            _walk_names(a, funcs, names, where)
        for k in node.keywords:
            _walk_names(k.value, funcs, names, where)
    elif isinstance(node, ast.Name):
        if node.id not in names and node.id not in ("True", "False"):
            raise SceneError(f"unresolved name {node.id!r}", where)
    elif isinstance(node, (ast.List, ast.Tuple)):
        for e in node.elts:
            _walk_names(e, funcs, names, where)
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, float):
            raise SceneError(f"float literal {node.value!r}; write rationals as 'p/q'", where)
    elif isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        _walk_names(node.left, funcs, names, where)
        _walk_names(node.right, funcs, names, where)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        _walk_names(node.operand, funcs, names, where)
    else:
        raise SceneError(f"unsupported syntax {type(node).__name__}", where)


def _eval(node: ast.expr, env: dict, funcs: dict) -> Any:
    if isinstance(node, ast.Call):
        f = funcs[node.func.id]
        args = [_eval(a, env, funcs) for a in node.args]
        kw = {k.arg: _eval(k.value, env, funcs) for k in node.keywords}
        return f(*args, **kw)
    if isinstance(node, ast.Name):
        if node.id in ("True", "False"):
            return node.id == "True"
        return env[node.id]
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_eval(e, env, funcs) for e in node.elts]
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.BinOp):
        return _rat(_eval(node.left, env, funcs)) / _rat(_eval(node.right, env, funcs))
    if isinstance(node, ast.UnaryOp):
        return -_rat(_eval(node.operand, env, funcs))
    raise TypeError(type(node).__name__)


def evaluate(src: str, env: dict | None = None, where: str = "<expr>") -> Any:
    """Evaluate one constructor expression against named objects."""
    env = env or {}
    node = _parse_expr(src, where)
    _walk_names(node, set(BUILDERS), set(env), where)
    try:
        return _eval(node, env, BUILDERS)
    except (ValueError, TypeError, ZeroDivisionError, KeyError) as exc:
        raise SceneError(str(exc), where) from None


# ---------------------------------------------------------------------------
# parsing


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise SceneError(f"duplicate key {k!r}")
        out[k] = v
    return out


def parse_scene_text(text: str) -> Scene:
    try:
        raw = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise SceneError(exc.msg, "", exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise SceneError("scene must be a JSON object")
    extra = set(raw) - set(SECTIONS)
    if extra:
        raise SceneError(f"unknown section(s) {sorted(extra)}")
    scene = Scene()
    seen: set = set()
    for sec in SECTIONS:
        body = raw.get(sec, {})
        if not isinstance(body, dict):
            raise SceneError(f"section {sec!r} must be an object of named definitions")
        for name in body:
            if not name.isidentifier():
                raise SceneError(f"invalid name {name!r}", f"{sec}.{name}")
            if name in seen:
                raise SceneError(f"name {name!r} defined twice", f"{sec}.{name}")
            seen.add(name)
    env: dict = {}
    for name, src in raw.get("stars", {}).items():
        obj = evaluate(src, env, f"stars.{name}")
        if not isinstance(obj, Star):
            raise SceneError("does not define a star", f"stars.{name}")
        scene.stars[name] = ast.unparse(_parse_expr(src, name))
        env[name] = obj
    for name, src in raw.get("elements", {}).items():
        obj = evaluate(src, env, f"elements.{name}")
        if not isinstance(obj, Homeo):
            raise SceneError("does not define an element", f"elements.{name}")
        scene.elements[name] = ast.unparse(_parse_expr(src, name))
        env[name] = obj
    funcs = set(BUILDERS) | set(CHECKS)
    for name, src in raw.get("checks", {}).items():
        where = f"checks.{name}"
        node = _parse_expr(src, where)
        if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in CHECKS):
            raise SceneError(f"a check must call one of {', '.join(CHECKS)}", where)
        _walk_names(node, funcs, set(env), where)
        scene.checks[name] = ast.unparse(node)
    for name, spec in raw.get("replays", {}).items():
        scene.replays[name] = _parse_replay(spec, env, f"replays.{name}")
    scene.objects = env
    return scene


def _parse_replay(spec, env: dict, where: str) -> dict:
    if not isinstance(spec, dict) or "scenario" not in spec:
        raise SceneError("replay needs a 'scenario'", where)
    scen = spec["scenario"]
    if scen not in SCENARIOS:
        raise SceneError(f"unknown scenario {scen!r}; expected one of {sorted(SCENARIOS)}", where)
    params = set(spec) - {"scenario"}
    want = set(SCENARIOS[scen])
    if params != want:
        raise SceneError(f"scenario {scen} takes parameters {sorted(want)}, got {sorted(params)}", where)
    out = {"scenario": scen}
    if scen == "lemma36":
        for k in SCENARIOS[scen]:
            v = spec[k]
            if isinstance(v, float) or isinstance(v, bool) or not isinstance(v, (int, str)):
                raise SceneError(f"{k} must be a rational string 'p/q'", where)
            try:
                out[k] = fmt(Q(v))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise SceneError(f"{k}: {exc}", where) from None
        r1, r2, r = (Q(out[k]) for k in ("r1", "r2", "r"))
        if not (0 < r1 < r2) or r <= 0 or r in (r1, r2):
            raise SceneError("need 0 < r1 < r2, r > 0 and r distinct from r1, r2", where)
    else:
        key = SCENARIOS[scen][0]
        ref = spec[key]
        kind = Star if key == "star" else Homeo
        if not isinstance(ref, str) or not isinstance(env.get(ref), kind):
            raise SceneError(f"{key} must name a defined {key}", where)
        out[key] = ref
    return out


def parse_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene_text(fh.read())


# ---------------------------------------------------------------------------
# running


@dataclass
class RunContext:
    budget: int = DEFAULT_BUDGET
    seed: int = 0


@dataclass
class SuiteReport:
    entries: list = field(default_factory=list)  # dicts, in declaration order

    @property
    def passed(self) -> bool:
        return all(e["status"] == "PASS" for e in self.entries)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            head = f"{e['kind']} {e['name']}: {e['status']}"
            if e.get("mode"):
                head += f" [{e['mode']}]"
            lines.append(head)
            if e.get("expr"):
                lines.append(f"  {e['expr']}")
            if e.get("detail"):
                lines.append(f"  {e['detail']}")
            if e.get("text"):
                lines += ["  " + ln for ln in e["text"].splitlines()[1:]]
        n_fail = sum(e["status"] != "PASS" for e in self.entries)
        lines.append(f"summary: {len(self.entries) - n_fail}/{len(self.entries)} passed; {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [{k: v for k, v in e.items() if k != "text"} for e in self.entries],
        }


def _status(v: TriBool) -> str:
    return {True: "PASS", False: "FAIL", None: "UNKNOWN"}[v.value]


def run_check(scene: Scene, name: str, ctx: RunContext) -> dict:
    src = scene.checks[name]
    funcs = dict(BUILDERS)
    funcs.update(_check_builders(ctx))
    try:
        res = _eval(ast.parse(src, mode="eval").body, scene.objects, funcs)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        res = CheckResult(TriBool.false(str(exc)), f"error: {exc}")
    v = res.verdict
    entry = {"kind": "check", "name": name, "expr": src, "status": _status(v), "mode": v.evidence.get("mode", "")}
    detail = res.detail
    if v.is_false and not detail:
        detail = f"witness {v.witness}"
    entry["detail"] = detail
    return entry


def run_replay(scene: Scene, name: str, ctx: RunContext) -> dict:
    spec = scene.replays[name]
    rep = execute_replay(spec, scene.objects, ctx.budget)
    return {
        "kind": "replay",
        "name": name,
        "status": "PASS" if rep.passed else "FAIL",
        "mode": "",
        "scenario": spec["scenario"],
        "case": rep.case,
        "detail": "; ".join(f"{k}={v}" for k, v in rep.to_dict()["info"].items() if k in _REPLAY_KEYS),
        "report": rep.to_dict(),
        "text": rep.to_text(),
    }


_REPLAY_KEYS = ("n_r", "k_r", "r0", "k", "R_phi", "y", "gamma_y", "x", "gamma_x", "witness_values", "literal_pair_equal")


def execute_replay(spec: dict, objects: dict, budget: int = DEFAULT_BUDGET) -> ReplayReport:
    scen = spec["scenario"]
    try:
        if scen == "lemma36":
            return replay_lemma36(Q(spec["r1"]), Q(spec["r2"]), Q(spec["r"]))
        if scen == "lemma37":
            return replay_lemma37(objects[spec["star"]], budget=budget)
        return replay_theorem38(objects[spec["element"]], budget=budget)
    except ValueError as exc:
        rep = ReplayReport(scen)
        rep.require("preconditions", False, str(exc))
        return rep


def run_suite(scene: Scene, budget: int = DEFAULT_BUDGET, seed: int = 0) -> SuiteReport:
    ctx = RunContext(budget, seed)
    rep = SuiteReport()
    for name in scene.checks:
        rep.entries.append(run_check(scene, name, ctx))
    for name in scene.replays:
        rep.entries.append(run_replay(scene, name, ctx))
    return rep
