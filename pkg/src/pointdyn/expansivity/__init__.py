"""Dynamical balls, expansivity verdicts, measures and auxiliary-set checks."""
from .auxiliary import (
    asymptotic_pair_check,
    canonical_coordinates_check,
    converging_semiorbit_check,
    in_converging_set,
    local_stable_membership,
    local_unstable_membership,
    periodic_restriction_expansivity,
    product_point,
    sink_check,
)
from .balls import (
    DEFAULT_DELTA_GRID,
    Cardinality,
    DynamicalBall,
    Window,
    first_violation,
    gamma_ball,
    gamma_subgroup_ball,
    n_expansive_cardinality,
    phi_ball,
    pointwise_expansivity_verdict,
    subgroup_containment,
    subgroup_radius,
)
from .measures import (
    BernoulliMeasure,
    EmpiricalSampler,
    MarkovMeasure,
    measure_of_ball,
    mu_generator_check,
    wilson_interval,
)
