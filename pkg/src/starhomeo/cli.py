"""Command line: ``starhomeo check|replay|sample|suite``.

Exit codes: 0 every verdict True, 1 a False or Unknown verdict, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .geometry import DEFAULT_BUDGET, PolarPoint, Star
from .homeo import Homeo
from .scene import (
    SceneError,
    SuiteReport,
    evaluate,
    execute_replay,
    parse_scene,
    parse_scene_text,
    run_suite,
)
from .scenes import BUNDLED

PRESET_REPLAYS = {
    "dented": "star([[0, '1/2'], ['1/8', 1], ['7/8', 1]])",
    "rotation": "orthogonal('1/4')",
    "profile": "separable(ball(1), ball(1), profile=homeo01([[0, 0], ['1/2', '1/4'], [1, 1]]))",
}


def sample_rows(obj, k: int) -> tuple[list[str], list[list[int]]]:
    """Exact samples at k equispaced turns.

    A star gives ``(theta, radial)``; a map sends the boundary point of its
    domain in each direction to its image.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    thetas = [Fraction(i, k) for i in range(k)]
    if isinstance(obj, Star):
        header = ["theta_num", "theta_den", "value_num", "value_den"]
        rows = []
        for t in thetas:
            v = obj(t)
            rows.append([t.numerator, t.denominator, v.numerator, v.denominator])
        return header, rows
    if isinstance(obj, Homeo):
        header = [
            "theta_num", "theta_den", "s_num", "s_den",
            "out_theta_num", "out_theta_den", "out_s_num", "out_s_den",
        ]
        rows = []
        for t in thetas:
            p = PolarPoint(t, obj.dom(t))
            q = obj(p)
            rows.append([p.theta.numerator, p.theta.denominator, p.s.numerator, p.s.denominator,
                         q.theta.numerator, q.theta.denominator, q.s.numerator, q.s.denominator])
        return header, rows
    raise TypeError("can only sample stars and elements")


def emit_samples(obj, k: int, out) -> None:
    header, rows = sample_rows(obj, k)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _figure(obj, k: int, path, title: str) -> None:
    from .plotting import render_map, render_star

    header, rows = sample_rows(obj, k)
    if isinstance(obj, Star):
        render_star(obj, path, [(Fraction(a, b), Fraction(c, d)) for a, b, c, d in rows], title)
    else:
        pairs = [
            (PolarPoint(Fraction(r[0], r[1]), Fraction(r[2], r[3])), PolarPoint(Fraction(r[4], r[5]), Fraction(r[6], r[7])))
            for r in rows
        ]
        render_map(obj, path, pairs, title)


def _emit_report(rep: SuiteReport, out: str | None) -> int:
    sys.stdout.write(rep.to_text())
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return rep.exit_code


def _cmd_check(args) -> int:
    scene = parse_scene(args.scene)
    return _emit_report(run_suite(scene, args.budget, args.seed), args.out)


def _cmd_suite(args) -> int:
    scene = parse_scene_text(BUNDLED[args.name])
    return _emit_report(run_suite(scene, args.budget, args.seed), args.out)


def _cmd_replay(args) -> int:
    p = args.params
    if args.scenario == "lemma36":
        if len(p) != 3:
            raise SceneError("lemma36 takes three rationals: r1 r2 r")
        spec = {"scenario": "lemma36", "r1": p[0], "r2": p[1], "r": p[2]}
        scene = parse_scene_text(json.dumps({"replays": {"lemma36": spec}}))
        objects = {}
        spec = scene.replays["lemma36"]
    else:
        key = "star" if args.scenario == "lemma37" else "element"
        default = "dented" if key == "star" else "rotation"
        src = p[0] if p else default
        if len(p) > 1:
            raise SceneError(f"{args.scenario} takes one {key} expression or preset name")
        obj = evaluate(PRESET_REPLAYS.get(src, src), where=f"replay {key}")
        if not isinstance(obj, Star if key == "star" else Homeo):
            raise SceneError(f"expected a {key}")
        objects = {"x": obj}
        spec = {"scenario": args.scenario, key: "x"}
    rep = execute_replay(spec, objects, args.budget)
    sys.stdout.write(rep.to_text() + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return 0 if rep.passed else 1


def _cmd_sample(args) -> int:
    env = parse_scene(args.scene).objects if args.scene else {}
    obj = env[args.name] if args.name in env else evaluate(args.name, env, "sample")
    emit_samples(obj, args.k, args.output)
    if args.figure:
        _figure(obj, args.k, args.figure, args.name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="starhomeo", description="Exact star partial homeomorphisms of the plane.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="certification depth (default 20)")
    common.add_argument("--seed", type=int, default=0, help="seed for random batteries (default 0)")
    common.add_argument("--out", help="write the structured JSON report here")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", parents=[common], help="run every check and replay of a scene file")
    p.add_argument("scene")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("suite", parents=[common], help="run a bundled scene")
    p.add_argument("name", choices=sorted(BUNDLED))
    p.set_defaults(func=_cmd_suite)

    p = sub.add_parser("replay", parents=[common], help="replay one proof scenario")
    p.add_argument("scenario", choices=["lemma36", "lemma37", "theorem38"])
    p.add_argument("params", nargs="*", help="r1 r2 r | star expression | element expression (or preset)")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("sample", parents=[common], help="write exact samples of a star or element as CSV")
    p.add_argument("name", help="a name from --scene, or a constructor expression")
    p.add_argument("-k", type=int, required=True, help="number of equispaced directions")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.add_argument("--scene", help="scene file providing names")
    p.add_argument("--figure", help="also render a PNG figure to this path")
    p.set_defaults(func=_cmd_sample)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "budget", 0) < 0:
        ap.error("--budget must be non-negative")
    if args.cmd == "sample" and args.k < 1:
        ap.error("-k must be at least 1")
    try:
        return args.func(args)
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
