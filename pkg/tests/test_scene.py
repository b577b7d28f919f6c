import json
from fractions import Fraction as F

import pytest

from starhomeo.geometry import Star
from starhomeo.homeo import Homeo
from starhomeo.scene import SceneError, evaluate, parse_scene_text, run_suite
from starhomeo.scenes import BUNDLED


def scene(**sections):
    return parse_scene_text(json.dumps(sections))


def test_idempotent_check_resolves():
    s = scene(
        elements={"alpha": "scaling(2, 1)"},
        checks={"c": "idempotent(compose(alpha, inverse(alpha)))"},
    )
    rep = run_suite(s)
    assert rep.passed and rep.exit_code == 0


def test_nonpositive_star_rejected():
    with pytest.raises(SceneError, match="positive"):
        scene(stars={"S": "star([[0, 1], ['1/4', 0]])"})


def test_replay_spec_roundtrip():
    s = scene(replays={"r": {"scenario": "lemma36", "r1": 1, "r2": "2", "r": "1/4"}})
    assert s.replays["r"] == {"scenario": "lemma36", "r1": "1", "r2": "2", "r": "1/4"}
    again = parse_scene_text(s.to_json())
    assert again == s
    assert again.to_json() == s.to_json()


def test_bundled_scene_roundtrip():
    s = parse_scene_text(BUNDLED["paper-core"])
    assert parse_scene_text(s.to_json()) == s
    assert len(s.replays) == 12


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"stars": {"S": "ball(0.5)"}}', "float"),
        ('{"stars": {"S": "ball(1)",}}', "line 1, column"),
        ('{"stars": {"S": "ball(1)", "S": "ball(2)"}}', "duplicate"),
        ('{"stars": {"S": "__import__(1)"}}', "unknown function"),
        ('{"shapes": {}}', "unknown section"),
        ('{"stars": {"S": "T"}}', ""),
        ('{"replays": {"r": {"scenario": "lemma99"}}}', ""),
        ('{"replays": {"r": {"scenario": "lemma36", "r1": "1", "r2": "2"}}}', ""),
    ],
)
def test_malformed_scenes(text, fragment):
    with pytest.raises(SceneError) as info:
        parse_scene_text(text)
    assert fragment in str(info.value)


def test_evaluate_vocabulary():
    S = evaluate("bump(ball(1), '1/4', '1/8', 1)")
    assert isinstance(S, Star) and S(F(1, 4)) == 2
    h = evaluate("compose(scaling(2, 1), orthogonal('1/4'))")
    assert isinstance(h, Homeo)
    assert evaluate("rotate(S, '1/2')", {"S": S})(F(3, 4)) == 2


def test_failed_check_reports_witness():
    s = scene(checks={"c": "equal(identity_on(ball(1)), identity_on(ball(2)))"})
    rep = run_suite(s)
    assert rep.exit_code == 1
    assert "radial 1 vs 2" in rep.to_text()


def test_budget_zero_gives_unknown():
    s = scene(
        stars={
            "B1": "ball(1)",
            "dent": "star([[0, '1/2'], ['1/8', 1], ['7/8', 1]])",
            "wedge": "star([[0, 1], ['1/4', 3], ['1/2', 1], ['3/4', '1/2']])",
        },
        elements={"g": "separable(B1, dent, profile=homeo01([[0, 0], ['1/2', '1/4'], [1, 1]]))"},
        checks={"c": "equal(compose(restrict(g, wedge), identity_on(B1)), restrict(g, intersect(wedge, B1)))"},
    )
    assert run_suite(s, budget=0).exit_code == 1
    assert "UNKNOWN" in run_suite(s, budget=0).to_text()
    assert run_suite(s).exit_code == 0
