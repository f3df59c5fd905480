"""Chaos verdicts at a point, separated sets and Bowen entropy."""
from .devaney import (
    default_sensitivity_constant,
    dense_periodic_at_point,
    devaney_point_verdict,
    periodic_point_near,
    probe_balls,
    sensitivity_constant_from_periodic,
    sensitivity_witness,
    verify_sensitivity_witness,
)
from .entropy import (
    DEFAULT_EPSILONS,
    EXACT,
    GREEDY,
    EntropyCertificate,
    EntropyEstimate,
    SeparatedSet,
    dn_distance,
    entropy_certificate_from_spec_points,
    entropy_estimate,
    separated_set,
    validate_separated,
    verify_entropy_certificate,
    word_candidates,
)

__all__ = [n for n in dir() if not n.startswith("_")]
