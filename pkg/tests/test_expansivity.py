from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointdyn.errors import MeasureSystemMismatch, NotACover, PreconditionError
from pointdyn.expansivity import (
    BernoulliMeasure,
    EmpiricalSampler,
    MarkovMeasure,
    Window,
    asymptotic_pair_check,
    canonical_coordinates_check,
    converging_semiorbit_check,
    gamma_ball,
    in_converging_set,
    local_stable_membership,
    local_unstable_membership,
    measure_of_ball,
    mu_generator_check,
    n_expansive_cardinality,
    periodic_restriction_expansivity,
    phi_ball,
    pointwise_expansivity_verdict,
    product_point,
    sink_check,
    subgroup_containment,
    wilson_interval,
)
from pointdyn.systems import (
    AccumulatingSequenceSpace,
    CloudPoint,
    Cylinder,
    DoublingCircle,
    FullShift,
    IdentityInterval,
    OrbitCloudSystem,
    SymSeq,
)

deltas = st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(3, 10)])


def in_ball_direct(shift, x, y, delta, times):
    return all(shift.distance(x.shift(n), y.shift(n)) <= delta for n in times)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 2), deltas)
def test_gamma_ball_matches_enumeration(seed, T, delta):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    cyl = gamma_ball(shift, x, delta, T).cylinder
    lo, hi = -T - 4, T + 4
    for w in product((0, 1), repeat=hi - lo + 1):
        y = x.with_coords({lo + i: s for i, s in enumerate(w)})
        assert cyl.contains(y) == in_ball_direct(shift, x, y, delta, range(-T, T + 1))


def test_phi_ball_is_forward_only():
    shift = FullShift(2)
    x = SymSeq.constant(0)
    cyl = phi_ball(shift, x, Fraction(1, 2), 3).cylinder
    assert cyl.positions == [0, 1, 2, 3]
    assert gamma_ball(shift, x, Fraction(1, 2), Window.one_sided(3)).cylinder == cyl


def test_subgroup_containment_both_ways():
    shift = FullShift(2)
    for x in shift.sample(None, 3, 5):
        for m in (2, 3, -2):
            c = subgroup_containment(shift, x, Fraction(1, 4), m, 3)
            assert c["subgroup_in_full"] and c["full_in_subgroup"]


def test_expansivity_on_shift_holds_at_half():
    shift = FullShift(2)
    delta, v = pointwise_expansivity_verdict(shift, SymSeq.periodic((0, 1)))
    assert v.holds and delta == Fraction(1, 2)


def test_expansivity_fails_on_identity_interval():
    delta, v = pointwise_expansivity_verdict(IdentityInterval(), Fraction(1, 3), T=4)
    assert delta is None and v.fails


def test_continuum_ball_never_collapses_at_finite_horizon():
    # points within delta / 2^T of x stay in the horizon ball, so the witness is not all-time
    _, v = pointwise_expansivity_verdict(DoublingCircle(), Fraction(1, 3), T=12)
    assert v.fails and not v.details["witness_all_times"]


def test_orbit_cloud_expansivity_split():
    X = OrbitCloudSystem()
    _, at_p = pointwise_expansivity_verdict(X, X.p, T=8)
    assert at_p.fails and str(at_p.witness).startswith("q(")
    assert at_p.details["witness_all_times"]
    _, at_y = pointwise_expansivity_verdict(X, SymSeq.from_window(0, (1, 1, 0, 1)), T=8)
    assert at_y.holds
    _, at_q = pointwise_expansivity_verdict(X, CloudPoint(2, 5, 1), T=8)
    assert at_q.holds


def test_accumulating_space_split():
    X, Y = AccumulatingSequenceSpace(True), AccumulatingSequenceSpace(False)
    _, va = pointwise_expansivity_verdict(X, "a")
    _, vb = pointwise_expansivity_verdict(X, "b")
    assert va.fails and vb.fails
    for i in (-5, 0, 3, 5):
        _, v = pointwise_expansivity_verdict(Y, i)
        assert v.holds


def test_n_expansive_cardinality():
    shift = FullShift(2)
    assert n_expansive_cardinality(shift, SymSeq.constant(0), Fraction(1, 2)).count == 1
    assert n_expansive_cardinality(shift, SymSeq.constant(0), Fraction(1)).kind == "infinite"
    Y = AccumulatingSequenceSpace(False)
    c = n_expansive_cardinality(Y, 0, 0.8)
    assert c.kind == "exact" and sorted(c.members) == [-1, 0, 1]
    assert c.eps_x == Y.distance(0, 1)
    assert n_expansive_cardinality(Y, 2, 0.2).kind == "infinite"
    assert n_expansive_cardinality(AccumulatingSequenceSpace(True), "a", 0.1).kind == "infinite"
    with pytest.raises(PreconditionError):
        n_expansive_cardinality(shift, SymSeq.constant(0), 0)


def test_delta_grid_must_descend():
    with pytest.raises(PreconditionError):
        pointwise_expansivity_verdict(FullShift(2), SymSeq.constant(0), delta_grid=[Fraction(1, 4), Fraction(1, 2)])


# -- measures ------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 6), deltas)
def test_bernoulli_half_ball_measure(seed, T, delta):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    ball = gamma_ball(shift, x, delta, T)
    mu = BernoulliMeasure((Fraction(1, 2), Fraction(1, 2)))
    assert measure_of_ball(mu, ball, shift) == Fraction(1, 2 ** len(ball.cylinder))


def test_bernoulli_and_markov_cylinders():
    mu = BernoulliMeasure((Fraction(1, 3), Fraction(2, 3)))
    assert mu.cylinder_measure(Cylinder({0: 1, 5: 0})) == Fraction(2, 9)
    P = [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1), Fraction(0)]]
    pi = [Fraction(2, 3), Fraction(1, 3)]
    nu = MarkovMeasure(P, pi)
    assert nu.cylinder_measure(Cylinder({0: 1, 1: 1})) == 0
    assert nu.cylinder_measure(Cylinder({0: 1, 2: 1})) == Fraction(1, 3) * Fraction(1, 2)
    total = sum(nu.cylinder_measure(Cylinder.word(0, w)) for w in product((0, 1), repeat=4))
    assert total == 1
    with pytest.raises(PreconditionError):
        MarkovMeasure(P, [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(PreconditionError):
        BernoulliMeasure((Fraction(1, 2), Fraction(1, 3)))


def test_measure_mismatches():
    shift = FullShift(3)
    ball = gamma_ball(shift, SymSeq.constant(2), Fraction(1, 2), 1)
    with pytest.raises(MeasureSystemMismatch):
        measure_of_ball(BernoulliMeasure((Fraction(1, 2), Fraction(1, 2))), ball, shift)


def test_empirical_measure_of_interval_ball():
    circle = DoublingCircle()
    ball = phi_ball(circle, Fraction(1, 3), Fraction(1, 8), 0)
    est, half = measure_of_ball(EmpiricalSampler(circle, None, seed=1, samples=20000), ball, circle)
    assert abs(est - 0.25) <= half + 0.01


def test_wilson_interval_brackets():
    c, h = wilson_interval(50, 100)
    assert c - h < 0.5 < c + h
    c, h = wilson_interval(0, 100)
    assert c - h <= 0 + 1e-12 and c + h > 0


def test_mu_generator():
    shift = FullShift(2)
    mu = BernoulliMeasure((Fraction(1, 2), Fraction(1, 2)))
    cover = [Cylinder({0: 0}), Cylinder({0: 1})]
    v = mu_generator_check(shift, cover, SymSeq.periodic((0, 1)), mu, 4)
    assert v.holds and v.details["max_measure"] == Fraction(1, 2 ** 9)
    with pytest.raises(NotACover):
        mu_generator_check(shift, [Cylinder({0: 0})], SymSeq.constant(0), mu, 2)


# -- auxiliary sets ---------------------------------------------------------------

def test_converging_semiorbit():
    shift = FullShift(2)
    y = SymSeq((0,), (1,), (0,), 0)
    assert converging_semiorbit_check(shift, y, 16, Fraction(1, 8)).holds
    assert converging_semiorbit_check(shift, SymSeq.periodic((0, 1)), 16, Fraction(1, 8)).fails


def test_in_converging_set():
    shift = FullShift(2)
    z = SymSeq((0,), (), (1,), 0)
    assert in_converging_set(shift, z, SymSeq.constant(0), SymSeq.constant(1), 4, 3, 10)
    assert not in_converging_set(shift, z, SymSeq.constant(1), SymSeq.constant(1), 4, 3, 10)


def test_asymptotic_pair():
    shift = FullShift(2)
    y = SymSeq((1,), (), (0,), 0)
    assert asymptotic_pair_check(shift, y, SymSeq.constant(0), SymSeq.constant(1), 16, Fraction(1, 4)).holds
    assert asymptotic_pair_check(shift, y, SymSeq.constant(1), SymSeq.constant(1), 16, Fraction(1, 4)).fails


def test_local_stable_and_unstable_sets():
    shift = FullShift(2)
    x = SymSeq.constant(0)
    past_differs = x.with_coords({-3: 1})
    future_differs = x.with_coords({3: 1})
    assert local_stable_membership(shift, past_differs, x, Fraction(1, 2), 8).holds
    assert local_stable_membership(shift, future_differs, x, Fraction(1, 2), 8).fails
    assert local_unstable_membership(shift, future_differs, x, Fraction(1, 2), 8).holds
    assert local_unstable_membership(shift, past_differs, x, Fraction(1, 2), 8).fails


def test_sink_check():
    assert sink_check(FullShift(2), SymSeq.constant(0), Fraction(1, 2), 8).fails
    assert sink_check(AccumulatingSequenceSpace(False), 0, 0.01, 4).holds
    # tanh(4) - tanh(3) < 0.01, so x4 sits in the unstable set of x3
    assert sink_check(AccumulatingSequenceSpace(False), 3, 0.01, 4).witness == "x4"


def test_product_point_and_canonical_coordinates():
    shift = FullShift(2)
    x, y = SymSeq.constant(0), SymSeq.constant(0).with_coords({5: 1, -5: 1})
    z = product_point(shift, x, y, Fraction(1, 2), 8)
    assert z is not None
    assert canonical_coordinates_check(shift, Fraction(1, 2), T=6).holds


def test_periodic_restriction_expansivity():
    v = periodic_restriction_expansivity(FullShift(2), period_bound=4)
    assert v.holds and v.details["points"] == 2 + 2 + 6 + 12
