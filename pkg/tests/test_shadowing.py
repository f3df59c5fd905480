from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointdyn.errors import ConnectorNotFound, GapTooSmall, PreconditionError, WindowOverlap
from pointdyn.intervals import Interval
from pointdyn.shadowing_spec import (
    PseudoOrbit,
    mixing_point_verdict,
    mixing_transition_time,
    perturbed_orbit,
    shadowable_point_verdict,
    specification_point_verdict,
    trace,
    transitive_point_verdict,
    verify_trace,
)
from pointdyn.shadowing_spec.feasible import check_infeasibility, forward_infeasibility, trace_targets
from pointdyn.shadowing_spec.mixing import check_escape_certificate, escape_certificate, shift_connector
from pointdyn.shadowing_spec.specification import (
    Segment,
    SpecSegments,
    default_battery,
    scalar_targets,
    specification_trace_glued,
    specification_trace_scalar,
    specification_trace_symbolic,
    verify_spec_trace,
)
from pointdyn.systems import (
    Cylinder,
    DoublingCircle,
    DoublingRay,
    FullShift,
    IdentityInterval,
    OneSidedShift,
    SquaringMap,
    SymSeq,
)
from pointdyn.systems.base import Ball

Q = Fraction


# -- pseudo-orbits and tracing ------------------------------------------------------

def test_pseudo_orbit_validation():
    circle = DoublingCircle()
    with pytest.raises(PreconditionError):
        PseudoOrbit(circle, Q(1, 100), [Q(1, 3), Q(1, 3)])
    po = PseudoOrbit(circle, Q(1, 100), [Q(1, 3), Q(2, 3) + Q(1, 1000)])
    assert PseudoOrbit.decode(circle, po.encode()).points == po.points
    with pytest.raises(PreconditionError):
        PseudoOrbit(circle, Q(1, 100), [Q(1, 3)])
    with pytest.raises(PreconditionError):
        PseudoOrbit(circle, Q(1, 100), [Q(1, 3), Q(2, 3)], through=Q(0))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_shift_pseudo_orbits_are_traced(seed):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    po = perturbed_orbit(shift, x, Q(1, 8), 12, seed)
    res = trace(shift, po, Q(1, 4), seed)
    assert res.ok and verify_trace(shift, res.tracer, po.points, Q(1, 4))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_circle_pseudo_orbits_are_traced(seed):
    circle = DoublingCircle()
    x = circle.sample(None, 1, seed)[0]
    po = perturbed_orbit(circle, x, Q(1, 64), 16, seed)
    res = trace(circle, po, Q(1, 16), seed)
    assert res.ok and verify_trace(circle, res.tracer, po.points, Q(1, 16))


def test_shadowable_points():
    assert shadowable_point_verdict(FullShift(2), SymSeq.periodic((0, 1)), Q(1, 4)).holds
    assert shadowable_point_verdict(DoublingRay(), Q(1), Q(1, 10)).holds
    assert shadowable_point_verdict(SquaringMap(), Q(1), Q(1, 10)).holds


def test_identity_drift_is_not_traced():
    # a steady drift of the identity leaves every fixed point behind
    ident = IdentityInterval()
    po = PseudoOrbit(ident, Q(1, 32), [Q(1, 4) + Q(i, 64) for i in range(33)])
    res = trace(ident, po, Q(1, 10))
    assert not res.ok


# -- feasible sets -------------------------------------------------------------------

def test_squaring_feasibility_certificate():
    sq = SquaringMap()
    targets = {0: Interval.point(Q(1)), 1: Interval.point(Q(1, 2))}
    cert = forward_infeasibility(sq, targets, Q(1, 10))
    assert cert is not None and check_infeasibility(sq, targets, Q(1, 10), cert)
    tampered = dict(cert, trail=[[]] + cert["trail"][1:])
    assert not check_infeasibility(sq, targets, Q(1, 10), tampered)
    y, none = trace_targets(sq, {0: Interval.point(Q(1, 2)), 1: Interval.point(Q(1, 4))}, Q(1, 10))
    assert y is not None and none is None


# -- mixing -----------------------------------------------------------------------

def test_shift_transition_and_connector():
    shift = FullShift(2)
    U, V = Cylinder({0: 1, 1: 1}), Cylinder({0: 0, 2: 1})
    tr = mixing_transition_time(shift, U, V)
    assert tr.kind == "time" and tr.all_n
    for n in range(tr.N, tr.N + 6):
        z = shift_connector(shift, U, V, n)
        assert U.contains(z) and V.contains(shift.iterate(z, n))


def test_circle_is_mixing_everywhere():
    circle = DoublingCircle()
    probes = [Ball(Q(k, 7), Q(1, 64)) for k in range(7)]
    assert mixing_point_verdict(circle, Q(3, 10), [Q(1, 8), Q(1, 32)], probes).holds


def test_escape_certificates_on_the_ray():
    ray = DoublingRay()
    U, V = Interval.open(Q(3, 4), Q(5, 4)), Interval.open(Q(1, 16), Q(3, 16))
    cert = escape_certificate(ray, U, V, 8)
    assert cert is not None and check_escape_certificate(ray, U, V, cert)
    assert not check_escape_certificate(ray, U, Interval.open(Q(1), Q(3)), cert)
    probes = [Ball(Q(1, 8), Q(1, 16))]
    assert mixing_point_verdict(ray, Q(1), [Q(1, 4)], probes).fails
    assert transitive_point_verdict(ray, Q(1), [Q(1, 4)], probes).fails
    assert mixing_point_verdict(ray, Q(0), [Q(1, 4)], probes + [Ball(Q(5), Q(1, 4))]).holds


# -- specification ------------------------------------------------------------------

def test_spec_segments_validation():
    x = SymSeq.constant(0)
    with pytest.raises(PreconditionError):
        SpecSegments([Segment(0, 2, x), Segment(4, 5, x)], 3, Q(1, 4))
    with pytest.raises(PreconditionError):
        SpecSegments([Segment(3, 2, x)], 3, Q(1, 4))
    with pytest.raises(PreconditionError):
        SpecSegments([], 3, Q(1, 4))
    spec = SpecSegments([Segment(0, 2, x), Segment(5, 7, SymSeq.constant(1))], 3, Q(1, 4))
    shift = FullShift(2)
    assert SpecSegments.decode(shift, spec.encode(shift)).segments == spec.segments
    assert spec.horizon == 7 and len(list(spec.constrained())) == 6


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_symbolic_tracers_satisfy_requests(seed, periodic):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    for spec in default_battery(shift, x, Q(1, 4), 6, seed, 4):
        res = specification_trace_symbolic(shift, spec, periodic)
        assert verify_spec_trace(shift, res.tracer, spec)
        if periodic:
            assert shift.iterate(res.tracer, res.periodic) == res.tracer


def test_symbolic_tracer_on_one_sided_shift():
    s = OneSidedShift(2)
    x = s.sample(None, 1, 3)[0]
    for spec in default_battery(s, x, Q(1, 4), 6, 3, 4):
        assert verify_spec_trace(s, specification_trace_symbolic(s, spec, True).tracer, spec)


def test_window_overlap_is_reported():
    shift = FullShift(2)
    spec = SpecSegments([Segment(0, 0, SymSeq.constant(0)), Segment(1, 1, SymSeq.constant(1))], 1, Q(1, 8))
    with pytest.raises(WindowOverlap):
        specification_trace_symbolic(shift, spec)


def test_glued_tracer_on_shift_and_circle():
    shift = FullShift(2)
    x = SymSeq.periodic((0, 1, 1))
    spec = SpecSegments([Segment(0, 3, x), Segment(15, 18, SymSeq.constant(1))], 12, Q(1, 4))
    res = specification_trace_glued(shift, x, spec)
    assert verify_spec_trace(shift, res.tracer, spec) and res.strategy.startswith("glued")
    circle = DoublingCircle()
    spec = SpecSegments([Segment(0, 2, Q(3, 10)), Segment(14, 16, Q(1, 7))], 12, Q(1, 8))
    res = specification_trace_glued(circle, Q(3, 10), spec)
    assert verify_spec_trace(circle, res.tracer, spec)


def test_glued_tracer_gap_too_small():
    shift = FullShift(2)
    x = SymSeq.constant(0)
    spec = SpecSegments([Segment(0, 0, x), Segment(2, 2, SymSeq.constant(1))], 2, Q(1, 4))
    with pytest.raises(GapTooSmall):
        specification_trace_glued(shift, x, spec)


def test_glued_tracer_on_ray_has_no_connector():
    ray = DoublingRay()
    # orbits never come back down to 0, and the escape certificate proves it
    spec = SpecSegments([Segment(0, 1, Q(3)), Segment(9, 10, Q(0))], 8, Q(1, 10))
    with pytest.raises(ConnectorNotFound) as info:
        specification_trace_glued(ray, Q(3), spec)
    assert info.value.certificate is not None


def test_scalar_tracer_on_circle():
    circle = DoublingCircle()
    spec = SpecSegments([Segment(0, 3, Q(3, 10)), Segment(10, 14, Q(5, 7))], 6, Q(1, 20))
    res = specification_trace_scalar(circle, spec)
    assert res.ok and verify_spec_trace(circle, res.tracer, spec)
    assert set(scalar_targets(circle, spec)) == {0, 1, 2, 3, 10, 11, 12, 13, 14}


def test_specification_point_verdicts():
    shift = FullShift(2)
    v = specification_point_verdict(shift, shift.sample(None, 1, 0)[0], Q(1, 4), seed=0)
    assert v.holds and v.details["M"] <= 6
    assert specification_point_verdict(DoublingCircle(), Q(3, 10), Q(1, 10), seed=0).holds
    for system, x in ((SquaringMap(), Q(1)), (DoublingRay(), Q(0))):
        v = specification_point_verdict(system, x, Q(1, 10), seed=0)
        assert v.fails
        w = v.witness
        spec = SpecSegments.decode(system, w["request"])
        assert check_infeasibility(system, scalar_targets(system, spec), spec.epsilon, w["certificate"])


def test_specification_points_are_mixing_on_shift():
    shift = FullShift(2)
    probes = [Ball(c, Q(1, 8)) for c in shift.sample(None, 6, 11)]
    for x in shift.sample(None, 4, 12):
        if specification_point_verdict(shift, x, Q(1, 4), M_grid=(6,)).holds:
            assert mixing_point_verdict(shift, x, [Q(1, 4), Q(1, 16)], probes).holds
