import random
from fractions import Fraction as F

import pytest

from starhomeo.geometry import PolarPoint, star_ball, star_bump, star_from_profile, star_intersect
from starhomeo.homeo import (
    Compose,
    Inverse,
    OutOfDomain,
    Restrict,
    Separable,
    apply,
    ball_to_star,
    compose,
    endpoints,
    homeo_compare,
    identity_on,
    inverse,
    is_idempotent,
    natural_leq,
    normalize,
    orthogonal,
    recheck_witness,
    restrict,
    scaling,
    separable,
)
from starhomeo.numerics import PLCircleMap, PLHomeo01
from starhomeo.samplers import random_separable, random_star

B1, B2, B3 = star_ball(1), star_ball(2), star_ball(3)
HALF = star_ball(F(1, 2))
SQUEEZE = PLHomeo01([(0, 0), (F(1, 2), F(1, 4)), (1, 1)])
BUMP = star_bump(B1, F(1, 4), F(1, 8), 1)
DENT = star_from_profile([(0, F(1, 2)), (F(1, 8), 1), (F(7, 8), 1)])
ALPHA = scaling(2, 1)


def P(theta, s):
    return PolarPoint(F(theta), F(s))


def test_identity_and_separable_application():
    assert apply(identity_on(B1), P(F(1, 3), F(1, 2))) == P(F(1, 3), F(1, 2))
    assert apply(separable(B1, B1, PLCircleMap.rotation(F(1, 4))), P(0, 1)) == P(F(1, 4), 1)
    assert apply(separable(B1, B1, profile=SQUEEZE), P(0, F(1, 2))) == P(0, F(1, 4))
    for t in (0, F(1, 5), F(5, 7)):
        assert apply(ball_to_star(B3), P(t, F(1, 2))) == P(t, F(3, 2))


def test_scaling_and_orthogonal():
    assert apply(ALPHA, P(0, 2)) == P(0, 1)
    assert apply(ALPHA, P(F(1, 3), 1)) == P(F(1, 3), F(1, 2))
    assert apply(Inverse(ALPHA), P(F(1, 3), F(1, 2))) == P(F(1, 3), 1)
    half_turn = orthogonal(F(1, 2))
    assert apply(half_turn, apply(half_turn, P(F(1, 8), 1))) == P(F(1, 8), 1)
    assert apply(Compose(ALPHA, ALPHA), P(0, 2)) == P(0, F(1, 2))


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        apply(ALPHA, P(0, F(5, 2)))
    with pytest.raises(OutOfDomain):
        apply(restrict(identity_on(B2), DENT), P(0, 1))


def test_origin_is_fixed():
    assert apply(orthogonal(F(1, 3)), P(F(1, 2), 0)).is_origin


def test_band_product_of_balls():
    assert compose(identity_on(B1), identity_on(B2)) == identity_on(B1)
    assert endpoints(identity_on(DENT)) == (DENT, DENT)


def test_compose_alpha_inverse():
    assert homeo_compare(compose(ALPHA, inverse(ALPHA)), identity_on(B2)).is_true
    assert homeo_compare(compose(inverse(ALPHA), ALPHA), identity_on(B1)).is_true


def test_alpha_squared_on_rays():
    sq = compose(ALPHA, ALPHA)
    assert endpoints(sq) == (B2, HALF)
    for k in range(33):
        t = F(k, 33)
        for s in (F(1, 3), 1, 2):
            assert apply(sq, P(t, s)) == P(t, s / 4)


def test_compose_pointwise_on_grid():
    rng = random.Random(5)
    a, b = random_separable(rng), random_separable(rng)
    ab = compose(a, b)
    for k in range(17):
        t = F(k, 17)
        for frac in (F(1, 4), F(3, 4)):
            p = P(t, ab.dom(t) * frac)
            assert apply(ab, p) == apply(b, apply(a, p))


def test_inverse():
    assert inverse(identity_on(DENT)) == identity_on(DENT)
    assert inverse(ALPHA) == scaling(1, 2)
    h = separable(DENT, BUMP, PLCircleMap.rotation(F(1, 3)), SQUEEZE)
    for k in range(12):
        p = P(F(k, 12), DENT(F(k, 12)) / 3)
        assert apply(inverse(h), apply(h, p)) == p


def test_restrict():
    assert restrict(identity_on(B2), B1) == identity_on(B1)
    h = separable(DENT, BUMP, profile=SQUEEZE)
    assert homeo_compare(restrict(h, h.dom), normalize(h)).is_true
    r = restrict(ALPHA, B1)
    assert endpoints(r) == (B1, HALF)
    for k in range(16):
        assert apply(r, P(F(k, 16), 1)) == P(F(k, 16), F(1, 2))


def test_normalize_fuses():
    n = normalize(Compose(ALPHA, scaling(1, F(1, 2))))
    assert isinstance(n, Separable)
    assert n == scaling(2, F(1, 2))
    beta = ball_to_star(BUMP)
    assert normalize(Compose(beta, Inverse(beta))) == identity_on(B1)
    assert normalize(Compose(Inverse(beta), beta)) == identity_on(BUMP)


def test_normalize_restriction_to_a_ball_fuses():
    # a ball restriction of a separable map is again separable
    n = normalize(Restrict(ALPHA, B1))
    assert isinstance(n, Separable)
    assert endpoints(n) == (B1, HALF)
    assert apply(n, P(F(1, 7), 1)) == apply(ALPHA, P(F(1, 7), 1))


def test_idempotents():
    assert is_idempotent(identity_on(DENT)).is_true
    v = is_idempotent(orthogonal(F(1, 4)))
    assert v.is_false
    assert v.witness == P(0, 1)
    assert v.evidence["image"] == P(F(1, 4), 1)
    rng = random.Random(1)
    for _ in range(5):
        h = random_separable(rng)
        assert is_idempotent(compose(h, inverse(h))).is_true


def test_natural_order():
    rng = random.Random(2)
    for _ in range(5):
        b, S = random_separable(rng), random_star(rng)
        assert natural_leq(restrict(b, S), b).is_true
    assert natural_leq(identity_on(B1), identity_on(B2)).is_true
    v = natural_leq(orthogonal(F(1, 4)), identity_on(B1))
    assert v.is_false
    assert recheck_witness(orthogonal(F(1, 4)), identity_on(B1), v.witness)


def test_compare():
    h = Compose(separable(DENT, BUMP, profile=SQUEEZE), separable(BUMP, B1))
    assert homeo_compare(h, normalize(h)).is_true
    v = homeo_compare(ALPHA, scaling(3, 1))
    assert v.is_false
    assert v.evidence["part"] == "domain"
    assert recheck_witness(ALPHA, scaling(3, 1), v.witness)


def test_associativity_on_sampled_rays():
    rng = random.Random(11)
    for _ in range(4):
        a, b, c = (random_separable(rng) for _ in range(3))
        left = compose(a, compose(b, c))
        right = compose(compose(a, b), c)
        assert homeo_compare(left, right).is_true
        for k in range(16):
            t = F(2 * k + 1, 32)
            assert left.dom(t) == right.dom(t)
            p = P(t, left.dom(t) / 2)
            assert apply(left, p) == apply(right, p) == apply(c, apply(b, apply(a, p)))


def test_budget_zero_is_unknown_off_the_fused_fragment():
    wedge = star_from_profile([(0, 1), (F(1, 4), 3), (F(1, 2), 1), (F(3, 4), F(1, 2))])
    g = separable(B1, DENT, profile=SQUEEZE)
    x = compose(restrict(g, wedge), identity_on(B1))
    y = restrict(g, star_intersect(wedge, B1))
    assert homeo_compare(x, y, budget=0).is_unknown
    v = homeo_compare(x, y)
    assert v.is_true and v.evidence["mode"] == "rays"
