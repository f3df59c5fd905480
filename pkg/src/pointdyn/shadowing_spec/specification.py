"""Specification requests and their tracers.

Three tracers: direct symbolic concatenation on shifts (optionally periodic),
the gluing construction (a pseudo-orbit of orbit pieces joined by mixing
connectors, then shadowed), and constraint propagation on scalar maps, which
also yields certified failures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import ConnectorNotFound, GapTooSmall, PreconditionError, WindowOverlap
from ..exact import as_fraction
from ..intervals import Interval
from ..systems.base import Ball, System, rng_for
from ..systems.scalar import DoublingCircle, ScalarSystem
from ..systems.symbolic import (
    Cylinder,
    OneSidedSeq,
    SymSeq,
    _ShiftBase,
    ball_cylinder,
    open_agreement_radius,
)
from ..verdict import Outcome, Verdict, encode, shard_seed
from . import feasible
from .mixing import mixing_transition_time, scalar_connector, shift_connector
from .tracing import PseudoOrbit, TraceFailure, TraceResult, trace


@dataclass(frozen=True)
class Segment:
    a: int
    b: int
    point: Any


class SpecSegments:
    """Segments (a_j, b_j, x_j) with 0 <= a_1 <= b_1 < a_2 <= ... and a_j - b_{j-1} >= M."""

    def __init__(self, segments, M: int, epsilon):
        self.segments = [s if isinstance(s, Segment) else Segment(*s) for s in segments]
        self.M = int(M)
        self.epsilon = as_fraction(epsilon)
        if not self.segments:
            raise PreconditionError("at least one segment is required")
        if self.M < 1 or self.epsilon <= 0:
            raise PreconditionError("need M >= 1 and epsilon > 0")
        prev_b = None
        for s in self.segments:
            if s.a < 0 or s.b < s.a:
                raise PreconditionError(f"bad segment [{s.a}, {s.b}]")
            if prev_b is not None:
                if s.a <= prev_b:
                    raise PreconditionError("segments must be increasing and disjoint")
                if s.a - prev_b < self.M:
                    raise PreconditionError(f"gap {s.a - prev_b} below M = {self.M}")
            prev_b = s.b

    def __len__(self):
        return len(self.segments)

    @property
    def horizon(self) -> int:
        return self.segments[-1].b

    def constrained(self):
        """(i, j) for every constrained time i of segment j."""
        for j, s in enumerate(self.segments):
            for i in range(s.a, s.b + 1):
                yield i, j

    def encode(self, system: System):
        return {
            "M": self.M,
            "epsilon": encode(self.epsilon),
            "segments": [{"a": s.a, "b": s.b, "point": system.encode_point(s.point)} for s in self.segments],
        }

    @classmethod
    def decode(cls, system: System, data: dict) -> "SpecSegments":
        segs = [Segment(int(s["a"]), int(s["b"]), system.decode_point(s["point"])) for s in data["segments"]]
        return cls(segs, int(data["M"]), Fraction(data["epsilon"]))


def spec_errors(system: System, tracer, spec: SpecSegments) -> dict:
    """{i: d(f^i tracer, f^i x_j)} over the constrained times (exact)."""
    if isinstance(system, ScalarSystem):
        return feasible.tracing_errors(system, tracer, scalar_targets(system, spec))
    out = {}
    for s in spec.segments:
        y, x = system.iterate(tracer, s.a), system.iterate(s.point, s.a)
        for i in range(s.a, s.b + 1):
            out[i] = system.distance(y, x)
            y, x = system.map(y), system.map(x)
    return out


def verify_spec_trace(system: System, tracer, spec: SpecSegments) -> bool:
    errs = spec_errors(system, tracer, spec)
    return max(errs.values()) < spec.epsilon


# -- symbolic -----------------------------------------------------------------

def symbolic_window_radius(epsilon) -> int:
    """Least R with agreement on |n| <= R forcing d < eps (0 when eps > 1)."""
    return max(open_agreement_radius(epsilon), 0)


def specification_trace_symbolic(system: _ShiftBase, spec: SpecSegments, periodic: bool = False) -> TraceResult:
    """Copy x_j on [a_j - R, b_j + R] (R the open agreement radius of eps), fill the rest with 0, optionally repeat with period b_k + M."""
    R = symbolic_window_radius(spec.epsilon)
    windows = [(s.a - R, s.b + R) for s in spec.segments]
    if system.one_sided:
        windows = [(max(lo, 0), hi) for lo, hi in windows]
    for (lo1, hi1), (lo2, hi2) in zip(windows, windows[1:]):
        if lo2 <= hi1:
            raise WindowOverlap(f"windows [{lo1},{hi1}] and [{lo2},{hi2}] overlap; raise M")
    coords = {}
    for s, (lo, hi) in zip(spec.segments, windows):
        for p in range(lo, hi + 1):
            coords[p] = s.point[p]
    period = None
    if periodic:
        period = spec.horizon + spec.M
        first_lo = windows[0][0]
        if not system.one_sided and first_lo + period <= windows[-1][1]:
            raise WindowOverlap("first and last windows overlap after wrapping; raise M")
        word = [0] * period
        for p, sym in coords.items():
            word[p % period] = sym
        tracer = OneSidedSeq.periodic(word) if system.one_sided else SymSeq.periodic(word)
    elif system.one_sided:
        top = max(coords)
        tracer = OneSidedSeq([coords.get(p, 0) for p in range(top + 1)], (0,))
    else:
        tracer = SymSeq.constant(0).with_coords(coords)
    errs = spec_errors(system, tracer, spec)
    if not max(errs.values()) < spec.epsilon:
        raise AssertionError("symbolic tracer failed its own verification")
    return TraceResult(tracer, errs, "symbolic_concatenation", periodic=period)


# -- gluing -------------------------------------------------------------------

def _net_ball(system: System, z, radius):
    """The canonical cover element containing z: a word cylinder on shifts, a grid ball otherwise."""
    if isinstance(system, _ShiftBase):
        return ball_cylinder(z, radius, True, system.one_sided)
    spacing = radius  # grid of spacing delta/2 with balls of radius delta/2
    center = Fraction(math.floor(as_fraction(z) / spacing + Fraction(1, 2))) * spacing
    if isinstance(system, DoublingCircle):
        center %= 1
    elif not system.domain.contains(center):
        center = as_fraction(z)
    return Ball(center, radius)


def _connector(system, z_from, z_to, gap, radius):
    U, V = _net_ball(system, z_from, radius), _net_ball(system, z_to, radius)
    tr = mixing_transition_time(system, U, V, max(gap, 1))
    if tr.kind == "certificate":
        raise ConnectorNotFound("net balls never meet at this gap", tr.certificate)
    if tr.kind != "time":
        raise ConnectorNotFound("no transition found", None)
    if tr.N > gap:
        raise GapTooSmall(f"transition time {tr.N} exceeds gap {gap}")
    if isinstance(system, _ShiftBase):
        y = shift_connector(system, U, V, gap, fill_from=z_from)
    else:
        y = scalar_connector(system, system.to_interval(U) if not isinstance(system, DoublingCircle)
                             else Interval(U.center - U.radius, U.center + U.radius, False, False),
                             system.to_interval(V) if not isinstance(system, DoublingCircle)
                             else Interval(V.center - V.radius, V.center + V.radius, False, False), gap)
        if isinstance(system, DoublingCircle) and y is not None:
            y %= 1
    if y is None:
        raise ConnectorNotFound("could not realize the transition", None)
    return y


def glued_pseudo_orbit(system: System, x, spec: SpecSegments, delta) -> list:
    """v_i: orbit of x_j on [a_j, b_j], connector orbits on [b_j + 1, a_{j+1} - 1], orbit of x before a_1."""
    segs = spec.segments
    if segs[0].point != x:
        raise PreconditionError("the first segment must be the specification point itself")
    radius = as_fraction(delta) / 2
    v = []
    z = x
    for i in range(segs[0].a):
        v.append(z)
        z = system.map(z)
    for j, s in enumerate(segs):
        z = system.iterate(s.point, s.a)
        for i in range(s.a, s.b + 1):
            v.append(z)
            z = system.map(z)
        if j + 1 < len(segs):
            nxt = segs[j + 1]
            gap = nxt.a - s.b - 1
            target = system.iterate(nxt.point, nxt.a)
            y = _connector(system, z, target, gap, radius)
            for _ in range(gap):
                v.append(y)
                y = system.map(y)
    v.append(z)  # one step of the tail f^i(x_k), i > b_k
    return v


def specification_trace_glued(system: System, x, spec: SpecSegments, seed: int = 0) -> TraceResult:
    """Join orbit pieces with mixing connectors, then eps/2-trace the resulting pseudo-orbit.

    delta is eps/4 so that connector jumps stay below delta and the shadowing
    tracer lands within eps of every constrained orbit point.
    """
    delta = spec.epsilon / 4
    v = glued_pseudo_orbit(system, x, spec, delta)
    po = PseudoOrbit(system, delta, v, through=x)
    res = trace(system, po, spec.epsilon / 2, seed=seed)
    if not res.ok:
        raise ConnectorNotFound("glued pseudo-orbit could not be traced", res.certificate)
    errs = spec_errors(system, res.tracer, spec)
    if not max(errs.values()) < spec.epsilon:
        raise ConnectorNotFound("glued tracer misses a segment", None)
    return TraceResult(res.tracer, errs, "glued_" + res.strategy)


# -- scalar -------------------------------------------------------------------

def scalar_targets(system: ScalarSystem, spec: SpecSegments) -> dict:
    out = {}
    for s in spec.segments:
        out.update(feasible.orbit_enclosures(system, s.point, range(s.a, s.b + 1)))
    return out


def specification_trace_scalar(system: ScalarSystem, spec: SpecSegments):
    targets = scalar_targets(system, spec)
    y, cert = feasible.trace_targets(system, targets, spec.epsilon)
    if y is not None:
        errs = feasible.tracing_errors(system, y, targets)
        if max(errs.values()) < spec.epsilon:
            return TraceResult(y, errs, "interval_preimage")
    if cert is not None:
        return TraceFailure("segments cannot be traced together", certified=True, certificate=cert)
    return TraceFailure("no tracer found")


def trace_spec(system: System, x, spec: SpecSegments, periodic: bool = False, seed: int = 0):
    """Try symbolic, then scalar propagation, then gluing; return TraceResult or TraceFailure."""
    if isinstance(system, _ShiftBase):
        try:
            return specification_trace_symbolic(system, spec, periodic)
        except WindowOverlap as exc:
            return TraceFailure(str(exc))
    if isinstance(system, ScalarSystem) and not periodic:
        return specification_trace_scalar(system, spec)
    try:
        return specification_trace_glued(system, x, spec, seed)
    except (ConnectorNotFound, GapTooSmall) as exc:
        cert = getattr(exc, "certificate", None)
        return TraceFailure(str(exc), certified=False, certificate=cert)


# -- batteries ----------------------------------------------------------------

# orbit-space target sequences that monotone or escaping maps cannot follow
SCALAR_TARGET_TEMPLATES = (
    (Fraction(1, 20), Fraction(1, 2)),
    (Fraction(1), Fraction(1, 4)),
    (Fraction(1, 2), Fraction(1, 20), Fraction(1, 2)),
    (Fraction(1, 4), Fraction(3, 4)),
)


def default_battery(system: System, x, epsilon, M: int, seed: int = 0, count: int = 8) -> list:
    """Seeded specification requests with first point x and gaps M..M+2.

    Scalar maps additionally get templated requests whose later points are
    chosen by their position at the segment start (so f^{a_j}(x_j) is prescribed).
    """
    rng = rng_for(seed)
    out = []
    for t in range(count):
        k = int(rng.integers(2, 5))
        a = int(rng.integers(0, 3))
        segs = []
        pts = [x] + system.sample(None, k - 1, shard_seed(seed, t)) if not isinstance(system, ScalarSystem) \
            else [x] + _scalar_points(system, k - 1, shard_seed(seed, t))
        for j in range(k):
            length = int(rng.integers(0, 4))
            segs.append(Segment(a, a + length, pts[j]))
            a = a + length + M + int(rng.integers(0, 3))
        out.append(SpecSegments(segs, M, epsilon))
    if isinstance(system, ScalarSystem):
        for targets in SCALAR_TARGET_TEMPLATES:
            segs = [Segment(0, 2, x)]
            a = 2 + M
            for value in targets:
                if not system.domain.contains(value):
                    continue
                segs.append(Segment(a, a, system.pull_back(value, a)))
                a += M
            out.append(SpecSegments(segs, M, epsilon))
    return out


def _scalar_points(system: ScalarSystem, n: int, seed: int) -> list:
    pts = system.sample(None, n, seed)
    # keep the denominators small so exact orbits stay cheap
    return [Fraction(round(p * 1024), 1024) for p in pts]


DEFAULT_M_GRID = (2, 4, 6, 8, 12, 16)


def specification_point_verdict(system: System, x, epsilon, M_grid=DEFAULT_M_GRID, battery=None, seed: int = 0,
                                count: int = 8, periodic: bool = False) -> Verdict:
    """Holds with the least grid M for which every battery request is traced.

    Fails when every grid M has a request with a certified failure.
    ``battery`` is a callable (M) -> list of SpecSegments; the default is seeded.
    """
    eps = as_fraction(epsilon)
    params = {"x": system.encode_point(x), "epsilon": eps, "M_grid": list(M_grid), "count": count,
              "periodic": periodic}
    make = battery or (lambda M: default_battery(system, x, eps, M, seed, count))
    certified, uncertified = [], []
    for M in sorted(M_grid):
        requests = make(M)
        failure = None
        for spec in requests:
            res = trace_spec(system, x, spec, periodic, seed)
            if not res.ok:
                failure = (spec, res)
                if res.certified:
                    break
        if failure is None:
            return Verdict("specification_point", Outcome.HOLDS, params, horizon=max(s.horizon for s in requests),
                           seed=seed, details={"M": M, "requests": len(requests)})
        spec, res = failure
        if res.certified:
            certified.append((M, spec, res))
        else:
            uncertified.append((M, res.reason))
    if uncertified:
        return Verdict("specification_point", Outcome.INCONCLUSIVE, params, seed=seed,
                       details={"uncertified": [{"M": m, "reason": r} for m, r in uncertified]})
    M, spec, res = certified[-1]
    witness = {"M": M, "request": spec.encode(system), "certificate": res.certificate}
    return Verdict("specification_point", Outcome.FAILS, params, witness=witness, seed=seed,
                   details={"certified_for_M": [c[0] for c in certified]})
