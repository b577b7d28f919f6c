from fractions import Fraction as F

import pytest

from starhomeo.congruence import (
    CongruenceTrace,
    RejectedStep,
    ReplayError,
    eps,
    minimal_exponent_above,
    minimal_exponent_below,
    replay_lemma36,
    replay_lemma37,
    replay_theorem38,
    trace_assert,
    trace_step,
)
from starhomeo.geometry import star_ball, star_from_profile
from starhomeo.homeo import compose, homeo_compare, identity_on, orthogonal, separable
from starhomeo.numerics import PLHomeo01

DENT = star_from_profile([(0, F(1, 2)), (F(1, 8), 1), (F(7, 8), 1)])
SQUEEZE = separable(star_ball(1), star_ball(1), profile=PLHomeo01([(0, 0), (F(1, 2), F(1, 4)), (1, 1)]))


def test_hypothesis_is_recorded():
    t = CongruenceTrace()
    p = t.hypothesis(eps(1), eps(2))
    assert t.pair(p) == (eps(1), eps(2))
    assert t.hypotheses() == [(eps(1), eps(2))]
    q = t.hypothesis(SQUEEZE, SQUEEZE)
    assert t.steps[q]["kind"] == "Hypothesis"
    assert t.replay()


def test_malformed_element_fails_upstream():
    with pytest.raises(ValueError):
        eps(0)


def test_mul_right_then_rewrite_between_balls():
    t = CongruenceTrace()
    p = t.hypothesis(eps(1), eps(2))
    q = t.mul_right(p, eps(F(3, 2)))
    q = t.rewrite(q, eps(1), eps(F(3, 2)))
    assert t.pair(q) == (eps(1), eps(F(3, 2)))
    assert [s["kind"] for s in t.steps] == ["Hypothesis", "MulRight", "IdentityRewrite"]
    assert t.replay()


def test_false_rewrite_is_rejected():
    t = CongruenceTrace()
    p = t.mul_right(t.hypothesis(eps(1), eps(2)), eps(2))
    with pytest.raises(RejectedStep) as info:
        t.rewrite(p, left=eps(2))  # claims ε1·ε2 = ε2
    cert = info.value.certificate
    assert cert.is_false
    w = cert.witness
    assert {eps(1).dom(w.theta), eps(2).dom(w.theta)} == {1, 2}
    assert len(t.steps) == 2


def test_symmetric_and_transitive():
    t = CongruenceTrace()
    p = t.hypothesis(eps(1), eps(2))
    s = t.symmetric(p)
    assert t.pair(s) == (eps(2), eps(1))
    q = t.hypothesis(eps(2), eps(3))
    assert t.pair(t.transitive(p, q)) == (eps(1), eps(3))
    with pytest.raises(RejectedStep):
        t.transitive(p, p)


def test_tampered_trace_fails_replay():
    t = CongruenceTrace()
    p = t.hypothesis(eps(1), eps(2))
    t.mul_left(eps(F(1, 2)), p)
    t.steps[1]["by"] = eps(F(3, 2))
    with pytest.raises(ReplayError):
        t.replay()


def test_minimal_exponents():
    # (1/2)^3 = 1/8 < 1/4 <= (1/2)^2
    assert minimal_exponent_below(F(1, 2), F(1, 4)) == 3
    # 2 * 2^2 = 8 > 5 >= 2 * 2^1
    assert minimal_exponent_above(F(2), F(5), F(2)) == 2


def test_lemma36_case_b():
    rep = replay_lemma36(1, 2, F(3, 2))
    assert rep.passed and rep.case == "b"
    t = rep.trace
    derived = [t.pair(i) for i in range(len(t.pairs)) if t.steps[t.pairs[i].step]["kind"] != "Hypothesis"]
    assert (eps(1), eps(F(3, 2))) in derived
    assert (eps(F(3, 2)), eps(2)) in derived
    assert t.replay()


def test_lemma36_case_a():
    rep = replay_lemma36(1, 2, F(1, 4))
    assert rep.passed and rep.case == "a"
    assert rep.info["n_r"] == 3
    assert all(label == "True" for _, label, _ in rep.identities)
    assert rep.trace.replay()


def test_lemma36_case_c():
    rep = replay_lemma36(1, 2, 5)
    assert rep.passed and rep.case == "c"
    assert rep.info["n_r"] == 2
    assert (rep.info["dom_beta"], rep.info["ran_beta"]) == (8, 4)
    names = " ".join(n for n, _, _ in rep.identities)
    assert "ε" in names
    assert rep.trace.replay()


@pytest.mark.parametrize(
    "r1, r2, r",
    [(F(1, 3), F(1, 2), F(1, 10)), (1, 2, F(1, 4)), (1, 2, 5), (1, 2, F(3, 2)), (2, 5, 40)],
)
def test_lemma36_final_pair(r1, r2, r):
    rep = replay_lemma36(r1, r2, r)
    assert rep.trace.pair(rep.info["final_pair"]) == (eps(r), eps(r2))


def test_lemma36_preconditions():
    with pytest.raises(ValueError):
        replay_lemma36(2, 1, 1)
    with pytest.raises(ValueError):
        replay_lemma36(1, 2, 1)


def test_lemma37_dented_ball():
    rep = replay_lemma37(DENT)
    assert rep.passed
    assert rep.info["k"] <= 7
    assert rep.info["dom_phi_is_pl"] is True
    assert rep.info["R_phi"] < 1
    assert rep.trace.replay()


def test_lemma37_small_ball_needs_no_rotations():
    rep = replay_lemma37(star_ball(F(1, 2)))
    assert rep.passed
    assert rep.info["k"] == 0 and rep.info["R_phi"] == F(1, 2)


def test_lemma37_rejects_unit_ball():
    with pytest.raises(ValueError, match="below 1"):
        replay_lemma37(star_ball(1))


def test_theorem38_rotation():
    rep = replay_theorem38(orthogonal(F(1, 4)))
    assert rep.passed and rep.case == "b"
    assert rep.info["x"] == 0 and rep.info["gamma_x"] == F(1, 4)
    assert rep.info["witness_values"] == [1, 2]
    assert rep.trace.replay()


def test_theorem38_radial_profile():
    rep = replay_theorem38(SQUEEZE)
    assert rep.passed and rep.case == "a"
    y, gy = rep.info["y"], rep.info["gamma_y"]
    assert (y.theta, y.s, gy.theta, gy.s) == (0, F(1, 2), 0, F(1, 4))
    assert rep.info["B_y"] == F(1, 2)
    a, b = rep.trace.pair(rep.info["idempotent_pair"])
    assert homeo_compare(a, b).is_false
    assert rep.trace.replay()


def test_theorem38_rejects_identity():
    with pytest.raises(ValueError):
        replay_theorem38(identity_on(star_ball(1)))


def test_report_serializes():
    rep = replay_lemma36(1, 2, F(1, 4))
    d = rep.to_dict()
    assert d["verdict"] == "pass" and d["info"]["r"] == "1/4"
    assert rep.to_text().startswith("replay lemma36: PASS (case a)")


def test_pair_sides_compose_exactly():
    assert compose(eps(1), eps(2)) == eps(1)


def test_step_front_door():
    t = CongruenceTrace()
    p = trace_assert(t, eps(1), eps(2))
    trace_assert(t, SQUEEZE, SQUEEZE)
    q = trace_step(t, ("MulRight", p, eps(F(3, 2))))
    q = trace_step(t, ("IdentityRewrite", q, eps(1), eps(F(3, 2))))
    assert t.pair(q) == (eps(1), eps(F(3, 2)))
    assert t.pair(trace_step(t, ("Symmetric", q))) == (eps(F(3, 2)), eps(1))
    assert t.pair(trace_step(t, ("Inverse", p))) == (eps(1), eps(2))
    with pytest.raises(ValueError):
        trace_step(t, ("Reflexive", p))
    with pytest.raises(RejectedStep):
        trace_step(t, ("IdentityRewrite", p, eps(2), None))
