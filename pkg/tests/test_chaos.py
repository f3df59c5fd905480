from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointdyn.chaos_entropy import (
    default_sensitivity_constant,
    dense_periodic_at_point,
    devaney_point_verdict,
    periodic_point_near,
    probe_balls,
    sensitivity_constant_from_periodic,
    sensitivity_witness,
    verify_sensitivity_witness,
)
from pointdyn.errors import NotPeriodic, PreconditionError
from pointdyn.systems import (
    DoublingCircle,
    FullShift,
    IdentityInterval,
    OneSidedSeq,
    OneSidedShift,
    SquaringMap,
    SymSeq,
)
from pointdyn.systems.base import Ball

Q = Fraction
RADII = [Q(1, 2 ** k) for k in range(1, 7)]


def test_default_constants():
    assert default_sensitivity_constant(FullShift(2)) == Q(1, 2)
    assert default_sensitivity_constant(DoublingCircle()) == Q(1, 8)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_shift_is_sensitive_everywhere(seed):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    v = sensitivity_witness(shift, x, RADII)
    assert v.holds
    for hit in v.witness:
        y = shift.decode_point(hit["y"])
        assert shift.distance(x, y) < hit["radius"]
        assert shift.distance(shift.iterate(x, hit["n"]), shift.iterate(y, hit["n"])) > Q(1, 2)


def test_circle_sensitive_identity_not():
    assert sensitivity_witness(DoublingCircle(), Q(3, 10), [Q(1, 1000)]).holds
    v = sensitivity_witness(IdentityInterval(), Q(1, 2), [Q(1, 10)])
    assert v.outcome.name == "INCONCLUSIVE"
    with pytest.raises(PreconditionError):
        sensitivity_witness(DoublingCircle(), Q(1, 3), [])


@pytest.mark.parametrize("x,q", [
    (SymSeq.periodic((0, 1, 1)), SymSeq.constant(1)),
    (SymSeq.from_window(0, (1, 0, 1)), SymSeq.periodic((0, 1))),
    (SymSeq.constant(0), SymSeq.constant(1)),
])
def test_sensitivity_construction_on_shift(x, q):
    shift = FullShift(2)
    v = sensitivity_constant_from_periodic(shift, x, q)
    assert v.holds
    w = v.witness
    assert w["eta"] == w["delta"] / 8 and w["j"] == w["k"] // w["n"] + 1
    assert verify_sensitivity_witness(shift, x, w)
    forged = dict(w, distance=w["eta"], time=0)
    assert not verify_sensitivity_witness(shift, x, forged)


# arcs near 0 wrap around the circle: (1/5, 0) and (19/20, 0) need the lifted pull-back
@pytest.mark.parametrize("x,q", [(Q(3, 10), Q(0)), (Q(1, 5), Q(1, 3)), (Q(5, 11), Q(1, 7)),
                                 (Q(1, 5), Q(0)), (Q(19, 20), Q(0))])
def test_sensitivity_construction_on_circle(x, q):
    circle = DoublingCircle()
    v = sensitivity_constant_from_periodic(circle, x, q)
    assert v.holds and verify_sensitivity_witness(circle, x, v.witness)


def test_sensitivity_construction_on_one_sided_shift():
    s = OneSidedShift(2)
    x = OneSidedSeq((1, 0, 1), (0,))
    v = sensitivity_constant_from_periodic(s, x, OneSidedSeq.periodic((1,)))
    assert v.holds and verify_sensitivity_witness(s, x, v.witness)


def test_sensitivity_construction_preconditions():
    shift = FullShift(2)
    with pytest.raises(PreconditionError):
        sensitivity_constant_from_periodic(shift, SymSeq.periodic((0, 1)), SymSeq.periodic((1, 0)))
    with pytest.raises(NotPeriodic):
        sensitivity_constant_from_periodic(shift, SymSeq.constant(0), SymSeq.from_window(0, (1,)))
    with pytest.raises(PreconditionError):
        sensitivity_constant_from_periodic(shift, SymSeq.constant(0), SymSeq.constant(1),
                                           N=Ball(SymSeq.constant(1), Q(1, 4)))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_periodic_tracers_land_in_deleted_balls(seed):
    shift = FullShift(2)
    x = shift.sample(None, 1, seed)[0]
    for r in RADII:
        z, branch, M = periodic_point_near(shift, x, r)
        assert z.is_periodic() and z != x and shift.distance(x, z) < r


def test_periodic_points_use_far_point_branch():
    shift = FullShift(2)
    z, branch, _ = periodic_point_near(shift, SymSeq.periodic((0, 1)), Q(1, 8))
    assert branch == "far_point" and z != SymSeq.periodic((0, 1))
    z, branch, _ = periodic_point_near(shift, SymSeq.constant(0), Q(1, 2))
    assert branch in ("far_point", "differing_point") and z != SymSeq.constant(0)


def test_dense_periodic_verdicts():
    assert dense_periodic_at_point(FullShift(2), SymSeq.constant(1), RADII).holds
    assert dense_periodic_at_point(OneSidedShift(2), OneSidedSeq.periodic((0, 1)), RADII[:4]).holds
    assert dense_periodic_at_point(DoublingCircle(), Q(3, 10), RADII).holds
    v = dense_periodic_at_point(SquaringMap(), Q(1, 2), [Q(1, 4)])
    assert v.fails and v.witness["periodic_set"] == [0, 1]


def test_devaney_point():
    shift = FullShift(2)
    probes = probe_balls(shift, 4, Q(1, 8), 0)
    v = devaney_point_verdict(shift, shift.sample(None, 1, 0)[0], [Q(1, 4), Q(1, 16)], probes)
    assert v.holds and set(v.details) == {"transitive", "dense_periodic", "sensitive"}
    sq = SquaringMap()
    v = devaney_point_verdict(sq, Q(1, 2), [Q(1, 4)], probe_balls(sq, 3, Q(1, 16), 0))
    assert v.fails


def test_probe_balls_are_seeded():
    circle = DoublingCircle()
    assert probe_balls(circle, 5, Q(1, 8), 3) == probe_balls(circle, 5, Q(1, 8), 3)
    assert probe_balls(circle, 5, Q(1, 8), 3) != probe_balls(circle, 5, Q(1, 8), 4)
