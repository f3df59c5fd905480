"""Canned batteries behind ``pointdyn suite``."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..chaos_entropy import (
    EXACT,
    dense_periodic_at_point,
    entropy_certificate_from_spec_points,
    entropy_estimate,
    probe_balls,
    sensitivity_constant_from_periodic,
    separated_set,
    validate_separated,
    verify_sensitivity_witness,
)
from ..chaos_entropy.entropy import GREEDY
from ..expansivity import (
    BernoulliMeasure,
    gamma_ball,
    measure_of_ball,
    pointwise_expansivity_verdict,
    subgroup_containment,
)
from ..shadowing_spec import (
    mixing_point_verdict,
    shadowable_point_verdict,
    specification_point_verdict,
)
from ..shadowing_spec.specification import default_battery, specification_trace_symbolic, verify_spec_trace
from ..systems import (
    AccumulatingSequenceSpace,
    CloudPoint,
    DoublingCircle,
    DoublingRay,
    FullShift,
    OrbitCloudSystem,
    SquaringMap,
    SymSeq,
)
from ..systems.base import Ball
from ..verdict import dumps, shard_seed
from .verify import verify_record

SUITES = ("worked-examples", "invariants", "entropy-table")
ALIASES = {"paper-examples": "worked-examples"}


@dataclass
class Row:
    group: str
    check: str
    expected: str
    observed: str
    ok: bool


def _outcome(v) -> str:
    return v.outcome.name.lower()


# -- worked examples --------------------------------------------------------------

def worked_examples(seed: int = 0) -> tuple[list, dict]:
    rows, artifacts = [], {}

    def add(group, check, expected, verdict, ok=None):
        observed = _outcome(verdict)
        rows.append(Row(group, check, expected, observed, observed == expected if ok is None else ok))
        artifacts[f"{group}__{check}"] = verdict.to_dict()

    # orbit cloud over the full 2-shift
    cloud = OrbitCloudSystem(FullShift(2), SymSeq.periodic((0, 1)), 2)
    _, v = pointwise_expansivity_verdict(cloud, cloud.p, T=8, seed=seed)
    add("orbit_cloud", "expansive_at_p", "fails", v,
        v.fails and str(v.witness).startswith("q("))
    y = SymSeq.from_window(0, (1, 1, 0, 1))
    _, v = pointwise_expansivity_verdict(cloud, y, T=8, seed=seed)
    add("orbit_cloud", "expansive_at_base_point", "holds", v)
    _, v = pointwise_expansivity_verdict(cloud, CloudPoint(1, 3, 0), T=8, seed=seed)
    add("orbit_cloud", "expansive_at_cloud_point", "holds", v)

    # accumulating sequence space with and without its limits
    X, Y = AccumulatingSequenceSpace(True), AccumulatingSequenceSpace(False)
    _, v = pointwise_expansivity_verdict(X, "a", seed=seed)
    add("accumulating_space", "expansive_at_limit", "fails", v)
    _, v = pointwise_expansivity_verdict(Y, 5, seed=seed)
    add("accumulating_space", "expansive_without_limits", "holds", v)

    # doubling on the half-line
    ray = DoublingRay()
    probes = probe_balls(ray, 4, Fraction(1, 8), seed) + [Ball(Fraction(1, 8), Fraction(1, 16))]
    radii = [Fraction(1, 4), Fraction(1, 16)]
    for x in (Fraction(1, 2), Fraction(1), Fraction(2)):
        v = mixing_point_verdict(ray, x, radii, probes)
        add("doubling_ray", f"mixing_at_{x}", "fails", v, v.fails and v.witness["certificate"]["kind"] == "escape")
    add("doubling_ray", "mixing_at_0", "holds", mixing_point_verdict(ray, Fraction(0), radii, probes))
    for x in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)):
        add("doubling_ray", f"shadowable_at_{x}", "holds",
            shadowable_point_verdict(ray, x, Fraction(1, 10), seed=seed))
    v = specification_point_verdict(ray, Fraction(0), Fraction(1, 10), seed=seed)
    add("doubling_ray", "specification_at_0", "fails", v)

    # squaring on [0, 1]
    sq = SquaringMap()
    est = entropy_estimate(sq, None, n_max=16, count=1 << 16, seed=seed)
    rows.append(Row("squaring", "entropy_rate_at_most_0.02", "<= 0.02", f"{est.rate:.4f}", est.rate <= 0.02))
    artifacts["squaring__entropy"] = est.to_dict()
    add("squaring", "shadowable_at_1", "holds", shadowable_point_verdict(sq, Fraction(1), Fraction(1, 10), seed=seed))
    v = specification_point_verdict(sq, Fraction(1), Fraction(1, 10), seed=seed)
    add("squaring", "specification_at_1", "fails", v)
    sq_probes = probe_balls(sq, 6, Fraction(1, 16), seed)
    v = mixing_point_verdict(sq, Fraction(1, 2), radii, sq_probes)
    add("squaring", "mixing_at_1/2", "fails", v)
    return rows, artifacts


# -- invariants ---------------------------------------------------------------

def _metric_axioms(system, pts) -> bool:
    # float-valued metrics get the documented 1e-12 slack on the triangle inequality
    tol = 1e-12 if isinstance(system.distance(pts[0], pts[1]), float) else 0
    for a in pts:
        if system.distance(a, a) != 0:
            return False
        for b in pts:
            if system.distance(a, b) != system.distance(b, a):
                return False
            for c in pts:
                if system.distance(a, c) > system.distance(a, b) + system.distance(b, c) + tol:
                    return False
    return True


def _ball_matches_oracle(shift, x, delta, T) -> bool:
    # every word near the window decides membership the same way as the direct definition
    from itertools import product

    cyl = gamma_ball(shift, x, delta, T).cylinder
    lo, hi = -T - 3, T + 3
    for w in product(range(2), repeat=hi - lo + 1):
        y = x.with_coords({lo + i: s for i, s in enumerate(w)})
        direct = all(shift.distance(x.shift(n), y.shift(n)) <= delta for n in range(-T, T + 1))
        if direct != cyl.contains(y):
            return False
    return True


def invariants(seed: int = 0) -> tuple[list, dict]:
    rows = []

    def check(group, name, ok):
        rows.append(Row(group, name, "pass", "pass" if ok else "fail", bool(ok)))

    shift = FullShift(2)
    circle = DoublingCircle()
    pts = shift.sample(None, 6, seed)
    check("systems", "shift_metric_axioms", _metric_axioms(shift, pts))
    check("systems", "circle_metric_axioms", _metric_axioms(circle, circle.sample(None, 6, seed)))
    X = AccumulatingSequenceSpace(True)
    check("systems", "accumulating_metric_axioms", _metric_axioms(X, ["a", "b", -3, 0, 2, 7]))
    check("systems", "shift_inverse_round_trip", all(shift.iterate(shift.iterate(p, -3), 3) == p for p in pts))

    for T in (1, 2):
        for delta in (Fraction(1, 2), Fraction(1, 4)):
            check("expansivity", f"gamma_ball_oracle_T{T}_delta{delta}", _ball_matches_oracle(shift, pts[0], delta, T))
    for m in (2, 3):
        c = subgroup_containment(shift, pts[1], Fraction(1, 4), m, 4)
        check("expansivity", f"subgroup_containment_m{m}", c["subgroup_in_full"] and c["full_in_subgroup"])
    mu = BernoulliMeasure((Fraction(1, 2), Fraction(1, 2)))
    ball = gamma_ball(shift, pts[2], Fraction(1, 4), 3)
    check("expansivity", "bernoulli_ball_measure",
          measure_of_ball(mu, ball, shift) == Fraction(1, 2 ** len(ball.cylinder)))

    for n in (1, 4, 8):
        S = separated_set(shift, None, n, Fraction(1, 2), EXACT)
        check("entropy", f"shift_words_separated_n{n}", len(S) == 2 ** n and validate_separated(shift, S))
    cands = [X.decode_point(f"x{i}") for i in range(-6, 7)]
    g = separated_set(X, None, 2, Fraction(1, 20), GREEDY, candidates=cands)
    e = separated_set(X, None, 2, Fraction(1, 20), EXACT, candidates=cands)
    check("entropy", "greedy_at_most_exact", len(g) <= len(e) and validate_separated(X, e))
    sq = SquaringMap()
    a = separated_set(sq, None, 6, Fraction(1, 8), EXACT, count=512)
    b = separated_set(sq, None, 6, Fraction(1, 4), EXACT, count=512)
    check("entropy", "count_monotone_in_epsilon", len(a) >= len(b))

    x = pts[3]
    ok = True
    for k, spec in enumerate(default_battery(shift, x, Fraction(1, 4), 6, seed, 6)):
        res = specification_trace_symbolic(shift, spec, periodic=k % 2 == 1)
        ok = ok and verify_spec_trace(shift, res.tracer, spec)
    check("specification", "symbolic_tracers_verify", ok)
    probes = probe_balls(shift, 4, Fraction(1, 4), seed)
    for i, p in enumerate(shift.sample(None, 3, shard_seed(seed, 7))):
        s = specification_point_verdict(shift, p, Fraction(1, 4), M_grid=(6,), seed=seed)
        mix = mixing_point_verdict(shift, p, [Fraction(1, 4)], probes)
        check("specification", f"specification_implies_mixing_{i}", (not s.holds) or mix.holds)
    for i, p in enumerate([pts[4], SymSeq.periodic((0, 1)), SymSeq.periodic((1,))]):
        v = dense_periodic_at_point(shift, p, [Fraction(1, 2 ** k) for k in range(1, 5)])
        check("chaos", f"dense_periodic_{i}", v.holds)
    q = SymSeq.constant(1)
    xs = SymSeq.periodic((0, 1, 1))
    v = sensitivity_constant_from_periodic(shift, xs, q)
    check("chaos", "sensitivity_construction_reverified", v.holds and verify_sensitivity_witness(shift, xs, v.witness))
    cert = entropy_certificate_from_spec_points(shift, SymSeq.constant(0), SymSeq.constant(1), Fraction(3, 10), 4, 2)
    rec = cert.to_dict()
    check("chaos", "entropy_certificate_reverified", verify_record(rec) == [])
    tampered = dict(rec, family=list(rec["family"]))
    p0 = shift.decode_point(tampered["family"][0])
    tampered["family"][0] = p0.with_coords({0: 1 - p0[0]}).encode()
    check("chaos", "entropy_certificate_tamper_detected", verify_record(tampered) != [])
    return rows, {}


# -- entropy table ----------------------------------------------------------------

def entropy_table(seed: int = 0) -> tuple[list, dict]:
    shift = FullShift(2)
    est = entropy_estimate(shift, None, [Fraction(1, 2)], 12, EXACT, seed=seed)
    rows = [Row("full_shift", "rate_equals_log2", "log 2 exactly",
                f"{est.rate!r} (slope/log2 = {est.fits[0].exact_log2_slope})",
                est.fits[0].exact_log2_slope == 1 and est.residual == 0)]
    ray = entropy_estimate(DoublingRay(), (0, 1), [Fraction(1, 64)], 12, EXACT, count=1 << 20, seed=seed)
    rows.append(Row("doubling_ray", "rate_near_log2", "near log 2", f"{ray.rate:.4f}", ray.rate > 0.5))
    sq = entropy_estimate(SquaringMap(), None, n_max=16, count=1 << 16, seed=seed)
    rows.append(Row("squaring", "rate_at_most_0.02", "<= 0.02", f"{sq.rate:.4f}", sq.rate <= 0.02))
    return rows, {"full_shift": est, "doubling_ray": ray, "squaring": sq}


# -- driver -------------------------------------------------------------------

def run_suite(name: str, seed: int = 0, out_dir=None, fmt: str = "json") -> tuple[list, str]:
    name = ALIASES.get(name, name)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    rows, artifacts = {"worked-examples": worked_examples, "invariants": invariants,
                      "entropy-table": entropy_table}[name](seed)
    table = format_table(rows)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "summary.json").write_text(dumps({"suite": name, "seed": seed, "rows": [r.__dict__ for r in rows]}) + "\n")
        for key, art in artifacts.items():
            safe = key.replace("/", "_")
            if name == "entropy-table" or fmt == "csv" and hasattr(art, "to_csv"):
                (d / f"{safe}.csv").write_text(art.to_csv())
            payload = art.to_dict() if hasattr(art, "to_dict") else art
            (d / f"{safe}.json").write_text(dumps(payload) + "\n")
    return rows, table


def format_table(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "check", "expected", "observed", "status"])
    for r in rows:
        w.writerow([r.group, r.check, r.expected, r.observed, "PASS" if r.ok else "FAIL"])
    passed = sum(r.ok for r in rows)
    return buf.getvalue() + f"# {passed} passed, {len(rows) - passed} failed\n"
