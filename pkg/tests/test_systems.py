import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointdyn.errors import (
    ConfigError,
    DomainViolation,
    MixedSystemPoints,
    NegativeIterateOnNonInvertible,
    NotPeriodic,
    PeriodNotPrime,
)
from pointdyn.intervals import Interval
from pointdyn.systems import (
    AccumulatingSequenceSpace,
    CloudPoint,
    Cylinder,
    DoublingCircle,
    DoublingRay,
    FullShift,
    IdentityInterval,
    OneSidedSeq,
    OneSidedShift,
    OrbitCloudSystem,
    SquaringMap,
    SymSeq,
    TentMap,
    closed_agreement_radius,
    make_system,
    open_agreement_radius,
    orbit_distance,
    prime_period,
    system_from_descriptor,
    system_from_section,
)

words = st.lists(st.integers(0, 1), min_size=1, max_size=6).map(tuple)
seqs = st.builds(lambda l, c, r, o: SymSeq(l, c, r, o), words, st.lists(st.integers(0, 1), max_size=8),
                 words, st.integers(-6, 6))


def naive_distance(a, b, reach=64):
    for m in range(reach):
        if a[m] != b[m] or a[-m] != b[-m]:
            return Fraction(1, 2 ** m)
    return Fraction(0)


@given(seqs, seqs)
def test_shift_metric_matches_coordinate_definition(a, b):
    shift = FullShift(2)
    assert shift.distance(a, b) == naive_distance(a, b)


@given(seqs, st.integers(-20, 20))
def test_normal_form_preserves_coordinates(a, k):
    b = SymSeq.decode(a.encode())
    assert b == a and hash(b) == hash(a)
    assert all(a.shift(k)[n] == a[n + k] for n in range(-15, 15))


@given(seqs, st.integers(-10, 10))
def test_shift_inverse(a, k):
    shift = FullShift(2)
    assert shift.iterate(shift.iterate(a, k), -k) == a


@given(seqs, seqs, st.integers(-8, 8))
def test_splice(a, b, cut):
    s = SymSeq.splice(a, cut, b)
    assert all(s[n] == (a[n] if n < cut else b[n]) for n in range(-20, 20))


def test_periodic_points_of_full_shift():
    shift = FullShift(2)
    for n in range(1, 7):
        pts = shift.periodic_points(n)
        assert len(pts) == 2 ** n and all(shift.iterate(p, n) == p for p in pts)
    assert prime_period(shift, SymSeq.periodic((0, 1, 1))) == 3
    assert prime_period(shift, SymSeq.from_window(0, (1,))) is None


@pytest.mark.parametrize("delta,r", [(Fraction(1), -1), (Fraction(1, 2), 0), (Fraction(3, 10), 1),
                                     (Fraction(1, 4), 1), (Fraction(1, 8), 2)])
def test_closed_agreement_radius(delta, r):
    assert closed_agreement_radius(delta) == r


@given(st.fractions(min_value=Fraction(1, 2 ** 12), max_value=1))
def test_agreement_radii_against_metric_values(eps):
    # d takes the values 2^-m; compare both radii with a direct scan
    assert all((Fraction(1, 2 ** m) <= eps) == (m > closed_agreement_radius(eps)) for m in range(0, 16))
    assert all((Fraction(1, 2 ** m) < eps) == (m > open_agreement_radius(eps)) for m in range(0, 16))


def test_cylinder_algebra():
    c = Cylinder({0: 1, 2: 0})
    assert Cylinder.decode(c.encode()) == c
    assert c.intersect(Cylinder({0: 0})) is None
    assert c.intersect(Cylinder({1: 1})).issubset(c)
    x = SymSeq.from_window(0, (1, 1, 0))
    assert c.contains(x) and c.preimage(3).contains(x.shift(-3))
    assert c.representative().window(0, 2)[0] == 1
    with pytest.raises(Exception):
        Cylinder([(0, 1), (0, 0)])


def test_one_sided_shift():
    s = OneSidedShift(2)
    x = OneSidedSeq((1, 0), (0, 1))
    assert s.map(x) == OneSidedSeq((0,), (0, 1))
    assert OneSidedSeq.decode(x.encode()) == x
    with pytest.raises(NegativeIterateOnNonInvertible):
        s.iterate(x, -1)
    assert s.distance(x, OneSidedSeq((1, 1), (0,))) == Fraction(1, 2)


def test_scalar_maps_exact():
    assert DoublingRay().map(Fraction(3, 4)) == Fraction(3, 2)
    assert SquaringMap().map(Fraction(1, 3)) == Fraction(1, 9)
    assert DoublingCircle().map(Fraction(3, 4)) == Fraction(1, 2)
    assert TentMap().map(Fraction(3, 4)) == Fraction(1, 2)
    assert IdentityInterval().map(Fraction(1, 3)) == Fraction(1, 3)
    assert DoublingCircle().distance(Fraction(1, 10), Fraction(9, 10)) == Fraction(1, 5)


def test_scalar_domain_checks():
    with pytest.raises(DomainViolation):
        SquaringMap().check_point(Fraction(3, 2))
    with pytest.raises(DomainViolation):
        DoublingRay().check_point(Fraction(-1))
    with pytest.raises(MixedSystemPoints):
        SquaringMap().check_point(SymSeq.constant(0))
    with pytest.raises(NegativeIterateOnNonInvertible):
        SquaringMap().iterate(Fraction(1, 2), -1)


@settings(max_examples=50)
@given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1))
def test_interval_images_contain_point_images(a, b):
    lo, hi = min(a, b), max(a, b)
    for system in (SquaringMap(), TentMap(), DoublingCircle()):
        pieces = system.interval_image(Interval.closed(lo, hi), 2)
        for x in (lo, hi, (lo + hi) / 2):
            if system.domain.contains(x):
                y = system.iterate(x, 2)
                assert any(p.contains(y) for p in pieces)


def test_known_periodic_sets():
    assert SquaringMap().all_periodic_points() == [0, 1]
    assert DoublingRay().all_periodic_points() == [0]
    assert DoublingCircle().all_periodic_points() is None
    circle = DoublingCircle()
    for n in range(1, 6):
        pts = circle.periodic_points(n)
        assert len(pts) == 2 ** n - 1 and all(circle.iterate(p, n) == p for p in pts)


def test_orbit_distance():
    circle = DoublingCircle()
    assert orbit_distance(circle, Fraction(3, 10), Fraction(0), 1) == Fraction(3, 10)
    assert orbit_distance(circle, Fraction(3, 10), Fraction(1, 3), 2) == Fraction(1, 30)


def test_samples_are_seeded_and_in_domain():
    for system in (FullShift(2), SquaringMap(), DoublingCircle(), DoublingRay()):
        a, b = system.sample(None, 5, 7), system.sample(None, 5, 7)
        assert a == b
        for p in a:
            system.check_point(p)


# -- orbit cloud system -------------------------------------------------------

def test_orbit_cloud_metric_cases():
    X = OrbitCloudSystem(FullShift(2), SymSeq.periodic((0, 1)), 2)
    p = X.p
    a, b = CloudPoint(1, 4, 0), CloudPoint(2, 4, 0)
    assert X.distance(a, b) == Fraction(1, 4)
    assert X.distance(a, p) == Fraction(1, 4)
    assert X.distance(CloudPoint(1, 2, 0), CloudPoint(1, 4, 0)) == Fraction(1, 2) + Fraction(1, 4)
    assert X.map(CloudPoint(3, 5, 1)) == CloudPoint(3, 5, 0)
    assert X.inverse(X.map(a)) == a
    assert X.decode_point(a.encode()) == a


def test_orbit_cloud_preconditions():
    with pytest.raises(NotPeriodic):
        OrbitCloudSystem(FullShift(2), SymSeq.from_window(0, (1,)), 2)
    with pytest.raises(PeriodNotPrime):
        OrbitCloudSystem(FullShift(2), SymSeq.constant(0), 2)
    X = OrbitCloudSystem()
    with pytest.raises(DomainViolation):
        X.check_point(CloudPoint(4, 1, 0))


def test_orbit_cloud_metric_axioms():
    X = OrbitCloudSystem()
    pts = [X.p, X.map(X.p), SymSeq.from_window(0, (1, 1))] + X.cloud_points(3)[:10]
    for a in pts:
        for b in pts:
            assert X.distance(a, b) == X.distance(b, a)
            assert (X.distance(a, b) == 0) == (a == b)
            for c in pts:
                assert X.distance(a, c) <= X.distance(a, b) + X.distance(b, c)


# -- accumulating sequence space --------------------------------------------------

def test_accumulating_space_points():
    X, Y = AccumulatingSequenceSpace(True), AccumulatingSequenceSpace(False)
    assert X.map(3) == 3 and X.distance("a", "b") == 2.0
    assert abs(X.distance(2, "a") - (1 - math.tanh(2))) < 1e-15
    with pytest.raises(DomainViolation):
        Y.check_point("a")
    assert X.decode_point(X.encode_point(-4)) == -4


# -- configuration -------------------------------------------------------------

def test_system_from_section_and_descriptor_round_trip():
    for section in ({"id": "full_shift", "alphabet_size": "3"}, {"id": "doubling_ray", "window": "64"},
                    {"id": "orbit_cloud", "periodic_word": "011"}, {"id": "squaring"},
                    {"id": "accumulating_space_open"}, {"id": "one_sided_shift"}):
        system = system_from_section(section)
        again = system_from_descriptor(system.descriptor())
        assert again.descriptor() == system.descriptor()


@pytest.mark.parametrize("section,path", [
    ({"id": "nope"}, "system.id"),
    ({}, "system.id"),
    ({"id": "full_shift", "colour": "red"}, "system.colour"),
    ({"id": "full_shift", "alphabet_size": "two"}, "system.alphabet_size"),
    ({"id": "orbit_cloud", "periodic_word": "ab"}, "system.periodic_word"),
])
def test_system_section_errors_name_the_field(section, path):
    with pytest.raises(ConfigError) as info:
        system_from_section(section)
    assert path in str(info.value)


def test_make_system_rejects_unknown():
    with pytest.raises(ConfigError):
        make_system("lorenz")
