from fractions import Fraction as F
from itertools import product

import pytest

from starhomeo.geometry import star_ball, star_bump, star_from_profile
from starhomeo.green import (
    BicyclicWord,
    NotIdempotent,
    bicyclic_build,
    bicyclic_nf_check,
    bicyclic_product,
    d_witness,
    green_relation,
    subgroup_check,
    word_element,
)
from starhomeo.homeo import (
    Separable,
    compose,
    homeo_compare,
    identity_on,
    inverse,
    orthogonal,
    scaling,
    separable,
)

B1, B2 = star_ball(1), star_ball(2)
BUMP = star_bump(B1, F(1, 4), F(1, 8), 1)
DENT = star_from_profile([(0, F(1, 2)), (F(1, 8), 1), (F(7, 8), 1)])


def test_green_by_endpoints():
    alpha = scaling(2, 1)
    assert green_relation("R", alpha, identity_on(B1)).verdict.is_true
    assert green_relation("H", alpha, alpha).verdict.is_true
    v = green_relation("L", alpha, scaling(3, 1)).verdict
    assert v.is_false
    assert green_relation("L", alpha, identity_on(B2)).verdict.is_true
    assert green_relation("H", alpha, identity_on(B2)).verdict.is_false


def test_d_and_j_are_universal():
    h1 = separable(DENT, BUMP)
    h2 = orthogonal(F(1, 3))
    for rel in "DJ":
        gv = green_relation(rel, h1, h2)
        assert gv.verdict.is_true
        u, _ = gv.witness
        assert u.dom == h1.dom and u.ran == h2.ran


def test_unknown_relation_name():
    with pytest.raises(ValueError):
        green_relation("X", identity_on(B1), identity_on(B1))


def test_d_witness_between_balls():
    a = d_witness(identity_on(B1), identity_on(B2))
    assert a == scaling(1, 2)
    assert homeo_compare(compose(a, inverse(a)), identity_on(B1)).is_true
    assert homeo_compare(compose(inverse(a), a), identity_on(B2)).is_true


def test_d_witness_of_equal_idempotents():
    e = identity_on(DENT)
    assert d_witness(e, e) == identity_on(DENT)


def test_d_witness_to_bump():
    a = d_witness(identity_on(B1), identity_on(BUMP))
    assert isinstance(a, Separable)
    assert (a.dom, a.ran) == (B1, BUMP)
    assert a.dir.is_identity and a.profile.is_identity
    assert homeo_compare(compose(a, inverse(a)), identity_on(B1)).evidence["mode"] == "exact"


def test_d_witness_needs_idempotents():
    with pytest.raises(NotIdempotent):
        d_witness(scaling(2, 1), identity_on(B1))


@pytest.mark.parametrize("r1, r2", [(1, 2), (F(1, 3), F(1, 2)), (2, 5)])
def test_bicyclic_relations(r1, r2):
    alpha, rep = bicyclic_build(r1, r2)
    assert rep.ok, rep.checks
    assert alpha.dom == star_ball(r2) and alpha.ran == star_ball(r1)


def test_bicyclic_distinct_balls_witness():
    _, rep = bicyclic_build(1, 2)
    last = rep.checks[-1]
    assert last[1] == "True" and "1 vs 2" in last[2]


def test_bicyclic_rejects_equal_radii():
    with pytest.raises(ValueError):
        bicyclic_build(2, 2)


def test_bicyclic_product_rules():
    w = BicyclicWord
    assert w(1, 1) * w(1, 1) == w(1, 1)
    assert w(0, 1) * w(1, 0) == w(0, 0)
    assert w(1, 0) * w(0, 1) == w(1, 1)
    with pytest.raises(ValueError):
        w(-1, 0)


def _oracle_product(a, b):
    (i, j), (k, l) = a, b
    m = max(j, k)
    return i - j + m, l - k + m


@pytest.mark.parametrize("r1, r2", [(1, 2), (F(1, 3), F(1, 2)), (2, 5)])
def test_normal_forms_by_radius(r1, r2):
    r1, r2 = F(r1), F(r2)
    c = r1 / r2
    alpha, _ = bicyclic_build(r1, r2)
    words = list(product(range(4), repeat=2))
    seen = set()
    for i, j in words:
        h = word_element(alpha, BicyclicWord(i, j))
        assert (h.dom(0), h.ran(0)) == (r2 * c**i, r2 * c**j)
        seen.add((h.dom(0), h.ran(0)))
    assert len(seen) == 16
    for a, b in product(words, repeat=2):
        i, j = _oracle_product(a, b)
        assert bicyclic_product(BicyclicWord(*a), BicyclicWord(*b)) == BicyclicWord(i, j)


def test_multiplication_table_matches():
    alpha, _ = bicyclic_build(1, 2)
    rep = bicyclic_nf_check(alpha)
    assert rep.ok
    assert rep.mismatches == []
    assert "256 products, 0 mismatches" in rep.checks[-1][2]


def test_sampled_maximal_subgroup_closure():
    import random

    from starhomeo.samplers import random_circle_map, random_profile

    rng = random.Random(3)
    members = [separable(BUMP, BUMP, random_circle_map(rng), random_profile(rng)) for _ in range(4)]
    rep = subgroup_check(identity_on(BUMP), members)
    assert rep.ok, [c for c in rep.checks if c[1] != "True"]
    assert len(rep.checks) == 1 + 4 * 4 + 16


def test_subgroup_check_flags_outsider():
    rep = subgroup_check(identity_on(B1), [orthogonal(F(1, 3)), scaling(1, 2)])
    failed = {name for name, label, _ in rep.checks if label != "True"}
    assert not rep.ok
    assert "#1 in H_e" in failed
    assert "#0 in H_e" not in failed
