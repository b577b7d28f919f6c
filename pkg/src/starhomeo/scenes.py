"""Bundled scenes."""

import json

CORE_SCENE = {
    "stars": {
        "B1": "ball(1)",
        "B2": "ball(2)",
        "dent": "star([[0, '1/2'], ['1/8', 1], ['7/8', 1]])",
        "bumped": "bump(B1, '1/4', '1/8', 1)",
        "wedge": "star([[0, 1], ['1/4', 3], ['1/2', 1], ['3/4', '1/2']])",
    },
    "elements": {
        "alpha": "scaling(2, 1)",
        "e1": "identity_on(B1)",
        "e2": "identity_on(B2)",
        "rot": "orthogonal('1/4')",
        "squeeze": "separable(B1, B1, profile=homeo01([[0, 0], ['1/2', '1/4'], [1, 1]]))",
        "beta": "ball_to_star(bumped)",
    },
    "checks": {
        "axioms_random": "battery('axioms', n=200, depth=3)",
        "band_random": "battery('band', n=100)",
        "green_random": "battery('green', n=100)",
        "dclass_random": "battery('bisimple', n=50)",
        "bicyclic_1_2": "bicyclic(1, 2)",
        "bicyclic_third_half": "bicyclic('1/3', '1/2')",
        "bicyclic_2_5": "bicyclic(2, 5)",
        "alpha_alpha_inv_idempotent": "idempotent(compose(alpha, inverse(alpha)))",
        "alpha_not_idempotent": "not_idempotent(alpha)",
        "alpha_halves": "maps(alpha, '1/3', 2, '1/3', 1)",
        "balls_distinct": "distinct(e1, e2)",
        "ball_order": "leq(e1, e2)",
        "band_product": "equal(compose(identity_on(dent), identity_on(wedge)), identity_on(intersect(dent, wedge)))",
        "dent_inside_ball": "relation(dent, B1, 'ProperSubset')",
        "bump_peak": "radial(bumped, '1/4', 2)",
        "bump_contains_peak": "contains(bumped, '1/4', 2)",
        "beta_axiom": "axioms(compose(beta, rot))",
        "green_R": "green('R', alpha, identity_on(ball(1)))",
        "green_not_L": "not_green('L', alpha, scaling(3, 1))",
        "dclass_balls": "d_witness(e1, e2)",
    },
    "replays": {
        "l36_1_2_below": {"scenario": "lemma36", "r1": "1", "r2": "2", "r": "1/4"},
        "l36_1_2_between": {"scenario": "lemma36", "r1": "1", "r2": "2", "r": "3/2"},
        "l36_1_2_above": {"scenario": "lemma36", "r1": "1", "r2": "2", "r": "5"},
        "l36_third_half_below": {"scenario": "lemma36", "r1": "1/3", "r2": "1/2", "r": "1/10"},
        "l36_third_half_between": {"scenario": "lemma36", "r1": "1/3", "r2": "1/2", "r": "2/5"},
        "l36_third_half_above": {"scenario": "lemma36", "r1": "1/3", "r2": "1/2", "r": "3"},
        "l36_2_5_below": {"scenario": "lemma36", "r1": "2", "r2": "5", "r": "1"},
        "l36_2_5_between": {"scenario": "lemma36", "r1": "2", "r2": "5", "r": "3"},
        "l36_2_5_above": {"scenario": "lemma36", "r1": "2", "r2": "5", "r": "40"},
        "l37_dent": {"scenario": "lemma37", "star": "dent"},
        "t38_rotation": {"scenario": "theorem38", "element": "rot"},
        "t38_radial_profile": {"scenario": "theorem38", "element": "squeeze"},
    },
}

BUNDLED = {"paper-core": json.dumps(CORE_SCENE, indent=2)}
