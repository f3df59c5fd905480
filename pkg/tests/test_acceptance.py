"""Acceptance criteria, one check per criterion.

Each check returns (ok, detail). Running this file directly prints one
PASS/FAIL line per criterion; under pytest the same lines are printed in the
terminal summary (see conftest.py).
"""
from __future__ import annotations

import json
import math
import tempfile
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

from pointdyn.chaos_entropy import (
    EXACT,
    dense_periodic_at_point,
    entropy_certificate_from_spec_points,
    entropy_estimate,
    probe_balls,
    sensitivity_constant_from_periodic,
    separated_set,
    verify_sensitivity_witness,
)
from pointdyn.cli import main as cli_main
from pointdyn.cli.suites import SUITES, run_suite
from pointdyn.cli.verify import verify_record
from pointdyn.expansivity import (
    BernoulliMeasure,
    gamma_ball,
    measure_of_ball,
    pointwise_expansivity_verdict,
    subgroup_containment,
)
from pointdyn.shadowing_spec import mixing_point_verdict, shadowable_point_verdict, specification_point_verdict
from pointdyn.shadowing_spec.mixing import _as_region, check_escape_certificate
from pointdyn.systems import (
    AccumulatingSequenceSpace,
    CloudPoint,
    DoublingCircle,
    DoublingRay,
    FullShift,
    OrbitCloudSystem,
    SquaringMap,
    SymSeq,
)
from pointdyn.systems.base import Ball
from pointdyn.verdict import encode, shard_seed

SEED = 0
RESULTS: dict = {}


def _record(number: int, title: str, ok: bool, detail: str):
    RESULTS[number] = (title, ok, detail)
    return ok, detail


# -- independent oracles ----------------------------------------------------------

def _word_distance(a: tuple, b: tuple, i: int) -> Fraction:
    """Shift metric between f^i of two finite words padded with 0 on both sides."""
    get = lambda w, n: w[n] if 0 <= n < len(w) else 0
    for m in range(0, len(a) + abs(i) + 2):
        if get(a, i + m) != get(b, i + m) or get(a, i - m) != get(b, i - m):
            return Fraction(1, 2 ** m)
    return Fraction(0)


def brute_force_separated_count(n: int, eps: Fraction) -> int:
    """Largest (n, eps)-separated subset of the words on [0, n-1], by pairwise enumeration.

    Non-separation is checked to be an equivalence on the candidates, so the
    maximum is the number of its classes.
    """
    words = list(product((0, 1), repeat=n))
    sep = {}
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            sep[a, b] = max(_word_distance(words[a], words[b], i) for i in range(n)) > eps
    same = lambda a, b: a == b or not sep[min(a, b), max(a, b)]
    classes = []
    for a in range(len(words)):
        hits = [c for c in classes if same(a, c[0])]
        if not hits:
            classes.append([a])
        else:
            assert len(hits) == 1 and all(same(a, m) for m in hits[0])
            hits[0].append(a)
    return len(classes)


def window_oracle_cylinder(shift, x, delta, T: int, reach: int = 12) -> dict:
    """Coordinates a ball over -T..T pins, found by flipping one coordinate at a time.

    A coordinate is pinned when flipping it alone takes the point outside the
    ball; the pinned value is x's symbol there.
    """
    pinned = {}
    for c in range(-T - reach, T + reach + 1):
        y = x.with_coords({c: 1 - x[c]})
        if any(shift.distance(x.shift(n), y.shift(n)) > delta for n in range(-T, T + 1)):
            pinned[c] = x[c]
    return pinned


def _direct_in_ball(shift, x, y, delta, T) -> bool:
    return all(shift.distance(x.shift(n), y.shift(n)) <= delta for n in range(-T, T + 1))


# -- criteria -------------------------------------------------------------------

def criterion_1():
    shift = FullShift(2)
    t0 = time.perf_counter()
    est = entropy_estimate(shift, None, [Fraction(1, 2)], 12, EXACT, seed=SEED)
    elapsed = time.perf_counter() - t0
    counts = {r[1]: r[2] for r in est.rows}
    counts_ok = all(counts[n] == 2 ** n for n in range(1, 13))
    fit = est.fits[0]
    rate_ok = fit.exact_log2_slope == 1 and est.residual == 0 and est.rate == math.log(2)
    oracle_ok = all(
        brute_force_separated_count(n, Fraction(1, 2)) == 2 ** n
        == len(separated_set(shift, None, n, Fraction(1, 2), EXACT))
        for n in range(1, 9))
    ok = counts_ok and rate_ok and oracle_ok and elapsed < 10
    return _record(1, "full 2-shift entropy s_n(1/2) = 2^n, rate log 2", ok,
                   f"counts={counts_ok} slope/log2={fit.exact_log2_slope} residual={est.residual} "
                   f"oracle(n<=8)={oracle_ok} time={elapsed:.2f}s")


def criterion_2():
    shift = FullShift(2)
    t0 = time.perf_counter()
    cert = entropy_certificate_from_spec_points(shift, SymSeq.constant(0), SymSeq.constant(1),
                                                Fraction(3, 10), 4, 6, seed=SEED)
    rec = cert.to_dict()
    family = [shift.decode_point(p) for p in rec["family"]]
    eps, horizon = Fraction(3, 10), rec["horizon"]
    failures = 0
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            d = max(shift.distance(family[a].shift(i), family[b].shift(i)) for i in range(horizon))
            failures += not d > eps
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "certificate.json"
        path.write_text(json.dumps(rec))
        cli_code = cli_main(["verify-certificate", str(path)])
    elapsed = time.perf_counter() - t0
    ok = (len(family) == 128 and len(set(family)) == 128 and horizon == 28 and failures == 0
          and rec["bound"] == "log(2)/M" and rec["bound_value"] == math.log(2) / 4 and cli_code == 0
          and elapsed < 30)
    return _record(2, "entropy certificate from two specification points", ok,
                   f"family={len(family)} horizon={horizon} separation_failures={failures} "
                   f"bound={rec['bound_value']:.6f} verify_exit={cli_code} time={elapsed:.2f}s")


def _escape_checks(system, x, verdict, radii, probes) -> bool:
    if not verdict.fails:
        return False
    w = verdict.witness
    cert = w["certificate"]
    U = _as_region(system, Ball(x, w["radius"]))
    V = _as_region(system, probes[w["probe"]])
    return cert["kind"] == "escape" and check_escape_certificate(system, U, V, cert)


def _infeasible_checks(system, verdict) -> bool:
    if not verdict.fails:
        return False
    w = verdict.witness
    rec = {"kind": "infeasible_request", "system": encode(system.descriptor()), "request": w["request"],
           "certificate": encode(w["certificate"])}
    return verify_record(rec) == []


def criterion_3():
    ray = DoublingRay()
    radii = [Fraction(1, 4), Fraction(1, 16)]
    probes = probe_balls(ray, 4, Fraction(1, 8), SEED) + [Ball(Fraction(1, 8), Fraction(1, 16))]
    mixing = {str(x): _escape_checks(ray, x, mixing_point_verdict(ray, x, radii, probes), radii, probes)
              for x in (Fraction(1, 2), Fraction(1), Fraction(2))}
    shadow = {str(x): shadowable_point_verdict(ray, x, Fraction(1, 10), seed=SEED).holds
              for x in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))}
    spec = _infeasible_checks(ray, specification_point_verdict(ray, Fraction(0), Fraction(1, 10), seed=SEED))
    ok = all(mixing.values()) and all(shadow.values()) and spec
    return _record(3, "doubling on the half-line: mixing/shadowing/specification", ok,
                   f"mixing_fails_with_escape={mixing} shadowable={shadow} spec_at_0_certified_failure={spec}")


def criterion_4():
    sq = SquaringMap()
    est = entropy_estimate(sq, None, n_max=16, count=1 << 16, seed=SEED)
    shadow = shadowable_point_verdict(sq, Fraction(1), Fraction(1, 10), seed=SEED).holds
    spec = _infeasible_checks(sq, specification_point_verdict(sq, Fraction(1), Fraction(1, 10), seed=SEED))
    radii = [Fraction(1, 4), Fraction(1, 16)]
    probes = probe_balls(sq, 6, Fraction(1, 16), SEED)
    mixing = _escape_checks(sq, Fraction(1, 2), mixing_point_verdict(sq, Fraction(1, 2), radii, probes),
                            radii, probes)
    ok = est.rate <= 0.02 and shadow and spec and mixing
    return _record(4, "squaring on [0,1]: entropy, shadowable at 1, no specification", ok,
                   f"entropy_rate={est.rate:.4f} (<= 0.02 required) shadowable_at_1={shadow} "
                   f"spec_at_1_certified_failure={spec} mixing_at_1/2_escape={mixing}")


def criterion_5():
    shift = FullShift(2)
    probes = probe_balls(shift, 10, Fraction(1, 8), SEED)
    radii = [Fraction(1, 4), Fraction(1, 16)]
    passing, violations, tried, i = 0, 0, 0, 0
    while passing < 20 and tried < 200:
        x = shift.sample(None, 1, shard_seed(SEED, i))[0]
        i += 1
        tried += 1
        if not specification_point_verdict(shift, x, Fraction(1, 4), M_grid=(6,), seed=SEED).holds:
            continue
        passing += 1
        violations += not mixing_point_verdict(shift, x, radii, probes).holds
    ok = passing == 20 and violations == 0
    return _record(5, "specification points are mixing points on the full 2-shift", ok,
                   f"spec_points={passing}/{tried} sampled mixing_violations={violations}")


def criterion_6():
    shift = FullShift(2)
    points = shift.sample(None, 14, SEED) + [
        SymSeq.constant(0), SymSeq.constant(1), SymSeq.periodic((0, 1)), SymSeq.periodic((0, 0, 1)),
        SymSeq.periodic((0, 1, 1, 0, 1)), SymSeq.periodic((1, 1, 0, 0, 0, 1, 0))]
    radii = [Fraction(1, 2 ** k) for k in range(1, 7)]
    failures, branches = 0, set()
    for x in points:
        v = dense_periodic_at_point(shift, x, radii)
        if not v.holds:
            failures += 1
            continue
        for item in v.witness:
            z = shift.decode_point(item["z"])
            branches.add(item["branch"])
            if not (z.is_periodic() and z != x and shift.distance(x, z) < item["radius"]):
                failures += 1
    ok = failures == 0 and "far_point" in branches
    return _record(6, "periodic tracers in every deleted ball around 20 points", ok,
                   f"points={len(points)} radii=2^-1..2^-6 failures={failures} branches={sorted(branches)}")


def criterion_7():
    shift, circle = FullShift(2), DoublingCircle()
    shift_q = [SymSeq.constant(0), SymSeq.constant(1), SymSeq.periodic((0, 1)), SymSeq.periodic((0, 0, 1))]
    circle_q = [Fraction(0), Fraction(1, 3), Fraction(1, 7), Fraction(2, 3)]
    stats = {}
    for name, system, qs in (("shift", shift, shift_q), ("circle", circle, circle_q)):
        good = inconclusive = 0
        for i, x in enumerate(system.sample(None, 10, SEED)):
            v = sensitivity_constant_from_periodic(system, x, qs[i % len(qs)])
            if v.holds:
                w = v.witness
                good += w["eta"] == w["delta"] / 8 and verify_sensitivity_witness(system, x, w)
            inconclusive += v.outcome.name == "INCONCLUSIVE"
        stats[name] = (good, inconclusive)
    ok = stats["shift"] == (10, 0) and stats["circle"][0] == 10
    return _record(7, "sensitivity constant eta = delta/8 from a nearby periodic orbit", ok,
                   f"shift verified/inconclusive={stats['shift']} circle verified/inconclusive={stats['circle']}")


def criterion_8():
    shift = FullShift(2)
    pts = shift.sample(None, 4, SEED) + [SymSeq.periodic((0, 1, 1))]
    rng_seed = shard_seed(SEED, 99)
    oracle_ok = True
    for x in pts[:3]:
        for T in range(0, 7):
            for delta in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
                cyl = gamma_ball(shift, x, delta, T).cylinder
                pinned = window_oracle_cylinder(shift, x, delta, T)
                oracle_ok &= dict(cyl.constraints) == pinned
                for y in shift.sample(None, 8, rng_seed + T):
                    z = y.with_coords({c: x[c] for c in list(pinned)[::2]})
                    oracle_ok &= cyl.contains(z) == _direct_in_ball(shift, x, z, delta, T)
    mu = BernoulliMeasure((Fraction(1, 2), Fraction(1, 2)))
    measure_ok = True
    for x in pts:
        for T in range(0, 7):
            ball = gamma_ball(shift, x, Fraction(1, 4), T)
            measure_ok &= measure_of_ball(mu, ball, shift) == Fraction(1, 2 ** len(ball.cylinder.constraints))
    containment_ok = True
    for x in pts:
        for m in (2, 3):
            for T in range(0, 7):
                c = subgroup_containment(shift, x, Fraction(1, 4), m, T)
                containment_ok &= c["subgroup_in_full"] and c["full_in_subgroup"]
    cloud = OrbitCloudSystem(FullShift(2), SymSeq.periodic((0, 1)), 2)
    _, at_p = pointwise_expansivity_verdict(cloud, cloud.p, T=8, seed=SEED)
    _, at_base = pointwise_expansivity_verdict(cloud, SymSeq.from_window(0, (1, 1, 0, 1)), T=8, seed=SEED)
    _, at_cloud = pointwise_expansivity_verdict(cloud, CloudPoint(1, 3, 0), T=8, seed=SEED)
    cloud_ok = at_p.fails and str(at_p.witness).startswith("q(") and at_base.holds and at_cloud.holds
    _, on_x = pointwise_expansivity_verdict(AccumulatingSequenceSpace(True), "a", seed=SEED)
    _, on_y = pointwise_expansivity_verdict(AccumulatingSequenceSpace(False), 5, seed=SEED)
    acc_ok = on_x.fails and on_y.holds
    ok = oracle_ok and measure_ok and containment_ok and cloud_ok and acc_ok
    return _record(8, "expansivity: balls, measures, subgroup containment, fixtures", ok,
                   f"gamma_ball_oracle={oracle_ok} bernoulli_measure={measure_ok} "
                   f"subgroup_containment={containment_ok} orbit_cloud={cloud_ok} accumulating_space={acc_ok}")


def _snapshot(d: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def criterion_9():
    same = {}
    with tempfile.TemporaryDirectory() as tmp:
        for name in SUITES:
            a, b = Path(tmp) / f"{name}_a", Path(tmp) / f"{name}_b"
            run_suite(name, SEED, a)
            run_suite(name, SEED, b)
            sa, sb = _snapshot(a), _snapshot(b)
            same[name] = bool(sa) and sa == sb
    ok = all(same.values())
    return _record(9, "suite reruns are byte-identical", ok, f"{same}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


def format_line(number: int) -> str:
    title, ok, detail = RESULTS[number]
    return f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {title} [{detail}]"


@pytest.mark.acceptance
@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    print(format_line(number))
    assert ok, detail


if __name__ == "__main__":
    for k, fn in enumerate(CRITERIA, 1):
        fn()
        print(format_line(k), flush=True)
