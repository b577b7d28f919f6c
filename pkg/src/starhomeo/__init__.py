"""Exact star partial homeomorphisms of the plane and their inverse semigroup."""

from .congruence import CongruenceTrace, RejectedStep, replay_lemma36, replay_lemma37, replay_theorem38
from .geometry import PolarPoint, Star, star_ball, star_bump, star_compare, star_from_profile, star_intersect
from .green import d_witness, green_relation
from .homeo import (
    apply,
    ball_to_star,
    compose,
    homeo_compare,
    identity_on,
    inverse,
    is_idempotent,
    natural_leq,
    orthogonal,
    restrict,
    scaling,
    separable,
)
from .tribool import TriBool

__version__ = "0.1.0"
