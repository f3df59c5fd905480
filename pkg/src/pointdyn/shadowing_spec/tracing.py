"""Pseudo-orbits, their generation, and tracing by capability.

Strategy order: symbolic splice (shifts), constraint propagation (scalar
maps), seeded candidate search (everything else). Every tracer is re-verified
before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import DomainViolation, PreconditionError
from ..exact import as_fraction, log2_floor, round_down
from ..intervals import Interval
from ..systems.base import System, rng_for
from ..systems.scalar import DoublingCircle, ScalarSystem
from ..systems.symbolic import FullShift, OneSidedSeq, OneSidedShift, SymSeq, _ShiftBase, open_agreement_radius
from ..verdict import Outcome, Verdict, encode, shard_seed
from . import feasible

PERTURB_BITS = 40


class PseudoOrbit:
    """Finite delta-pseudo-orbit: d(f(x_i), x_{i+1}) < delta, validated on construction."""

    def __init__(self, system: System, delta, points, through=None):
        self.delta = as_fraction(delta)
        if self.delta <= 0:
            raise PreconditionError("delta must be positive")
        self.points = list(points)
        if len(self.points) < 2:
            raise PreconditionError("a pseudo-orbit needs at least two points")
        if through is not None and through != self.points[0]:
            raise PreconditionError("pseudo-orbit does not start at its designated point")
        for p in self.points:
            system.check_point(p)
        for i in range(len(self.points) - 1):
            jump = system.distance(system.map(self.points[i]), self.points[i + 1])
            if not jump < self.delta:
                raise PreconditionError(f"step {i} jumps by {jump} >= delta")
        self.system = system
        self.through = through

    def __len__(self):
        return len(self.points)

    def encode(self):
        return {"delta": encode(self.delta), "points": [self.system.encode_point(p) for p in self.points]}

    @classmethod
    def decode(cls, system: System, data: dict) -> "PseudoOrbit":
        return cls(system, Fraction(data["delta"]), [system.decode_point(p) for p in data["points"]])


@dataclass
class TraceResult:
    tracer: Any
    errors: dict
    strategy: str
    periodic: int | None = None

    @property
    def max_error(self):
        return max(self.errors.values()) if self.errors else 0

    @property
    def ok(self) -> bool:
        return True

    def encode(self, system: System | None = None):
        enc = system.encode_point if system is not None else encode
        return {"tracer": enc(self.tracer), "strategy": self.strategy, "max_error": encode(self.max_error),
                "periodic": self.periodic}


@dataclass
class TraceFailure:
    """No tracer found. ``certified`` failures carry a machine-checkable certificate."""

    reason: str
    certified: bool = False
    certificate: dict | None = None
    best_candidate: Any = None
    best_error: Any = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return False

    def encode(self, system: System | None = None):
        out = {"reason": self.reason, "certified": self.certified}
        if self.certificate is not None:
            out["certificate"] = encode(self.certificate)
        if self.best_candidate is not None:
            enc = system.encode_point if system is not None else encode
            out["best_candidate"] = enc(self.best_candidate)
            out["best_error"] = encode(self.best_error)
        return out


# -- generation ------------------------------------------------------------

def _perturb_symbolic(system: _ShiftBase, z, delta, rng):
    # stay strictly within delta / 2: agree on the open radius of delta / 2
    r = open_agreement_radius(delta / 2)
    band = range(max(r + 1, 0), max(r + 1, 0) + 6)
    coords = {}
    for pos in band:
        if rng.random() < 0.3:
            coords[pos] = int(rng.integers(0, system.k))
        if not system.one_sided and rng.random() < 0.3:
            coords[-pos] = int(rng.integers(0, system.k))
    if isinstance(z, OneSidedSeq):
        n = max(max(coords, default=0) + 1, len(z.core))
        word = list(z.window(0, n - 1))
        for p, s in coords.items():
            word[p] = s
        return OneSidedSeq(word, z.window(n, n + len(z.tail) - 1))
    return z.with_coords(coords)


def _perturb_scalar(system: ScalarSystem, z, delta, rng):
    # |u| <= delta/4 plus a dyadic rounding below delta/4 keeps the jump under delta/2
    quarter = delta / 4
    bits = PERTURB_BITS + max(0, -log2_floor(quarter)) + 1
    scale = 1 << PERTURB_BITS
    u = Fraction(int(rng.integers(-scale, scale + 1)), scale) * quarter
    if isinstance(system, DoublingCircle):
        return round_down((z + u) % 1, bits)
    dom = system.domain
    y = round_down(z + u, bits)
    if not dom.contains(y):
        y = round_down(z - u, bits)
    if not dom.contains(y):
        y = z
    return y


def perturbed_orbit(system: System, x, delta, length: int, seed: int) -> PseudoOrbit:
    """A delta-pseudo-orbit through x: each true image moved by less than delta / 2."""
    delta = as_fraction(delta)
    if delta <= 0 or length < 2:
        raise PreconditionError("need delta > 0 and length >= 2")
    try:
        system.check_point(x)
    except DomainViolation:
        raise
    rng = rng_for(seed)
    pts = [x]
    for _ in range(length - 1):
        z = system.map(pts[-1])
        if isinstance(system, _ShiftBase):
            y = _perturb_symbolic(system, z, delta, rng)
        elif isinstance(system, ScalarSystem):
            y = _perturb_scalar(system, z, delta, rng)
        else:
            cands = [z] + system.neighbors(z, delta / 2, 8, int(rng.integers(0, 1 << 62)))
            cands = [c for c in cands if system.distance(z, c) < delta / 2]
            y = cands[int(rng.integers(0, len(cands)))]
        pts.append(y)
    return PseudoOrbit(system, delta, pts, through=x)


# -- tracing ---------------------------------------------------------------

def splice_tracer(system: _ShiftBase, points: list):
    """Tracer whose coordinate i is coordinate 0 of x_i, padded by x_0's past and x_{L-1}'s future."""
    L = len(points)
    if isinstance(system, OneSidedShift):
        last = points[-1]
        word = [p[0] for p in points] + list(last.window(1, len(last.core) + 1))
        return OneSidedSeq(word, last.tail)
    head = points[0]
    tail = points[-1].shift(-(L - 1))
    z = SymSeq.splice(head, L - 1, tail)
    return z.with_coords({i: points[i][0] for i in range(L)})


def _errors(system: System, y, points: list) -> dict:
    out, z = {}, y
    for i, p in enumerate(points):
        out[i] = system.distance(z, p)
        z = system.map(z)
    return out


def trace(system: System, po, epsilon, seed: int = 0, budget: int = 256):
    """TraceResult (re-verified) or TraceFailure."""
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise PreconditionError("epsilon must be positive")
    points = po.points if isinstance(po, PseudoOrbit) else list(po)
    x0 = points[0]
    # a true orbit traces itself
    if all(system.map(points[i]) == points[i + 1] for i in range(len(points) - 1)):
        return TraceResult(x0, {i: 0 for i in range(len(points))}, "true_orbit")
    if isinstance(system, _ShiftBase):
        y = splice_tracer(system, points)
        errs = _errors(system, y, points)
        if max(errs.values()) < eps:
            return TraceResult(y, errs, "symbolic_splice")
    if isinstance(system, ScalarSystem):
        if isinstance(system, DoublingCircle):
            y = system.backward_trace(points)
            errs = _errors(system, y, points)
            if max(errs.values()) < eps:
                return TraceResult(y, errs, "binary_pullback")
        targets = {i: Interval.point(as_fraction(p)) for i, p in enumerate(points)}
        y, cert = feasible.trace_targets(system, targets, eps)
        if y is not None:
            errs = feasible.tracing_errors(system, y, targets)
            if max(errs.values()) < eps:
                return TraceResult(y, errs, "interval_preimage")
        if cert is not None:
            return TraceFailure("no point traces the pseudo-orbit", certified=True, certificate=cert)
    # generic seeded search
    best, best_err = None, None
    for y in [x0] + system.neighbors(x0, eps, budget, seed):
        errs = _errors(system, y, points)
        m = max(errs.values())
        if best_err is None or m < best_err:
            best, best_err = y, m
        if m < eps:
            return TraceResult(y, errs, "candidate_search")
    return TraceFailure("candidate search exhausted", best_candidate=best, best_error=best_err)


def verify_trace(system: System, tracer, points: list, epsilon) -> bool:
    errs = _errors(system, tracer, points)
    return max(errs.values()) < as_fraction(epsilon)


DEFAULT_SHADOW_DELTAS = tuple(Fraction(1, 1 << k) for k in range(2, 14))


def shadowable_point_verdict(system: System, x, epsilon, delta_grid=DEFAULT_SHADOW_DELTAS, trials: int = 20,
                             length: int = 16, seed: int = 0) -> Verdict:
    """Holds at eps when some grid delta lets every seeded delta-pseudo-orbit through x be eps-traced.

    Fails only when every grid delta has a certified untraceable pseudo-orbit.
    """
    eps = as_fraction(epsilon)
    params = {"x": system.encode_point(x), "epsilon": eps, "delta_grid": list(delta_grid), "trials": trials,
              "length": length}
    certified_failures = []
    for delta in delta_grid:
        failure = None
        for t in range(trials):
            po = perturbed_orbit(system, x, delta, length, shard_seed(seed, t))
            res = trace(system, po, eps, seed=shard_seed(seed, t))
            if not res.ok:
                failure = (po, res)
                break
        if failure is None:
            return Verdict("shadowable_point", Outcome.HOLDS, params, horizon=length, seed=seed,
                           details={"delta": delta})
        po, res = failure
        if res.certified:
            certified_failures.append({"delta": delta, "pseudo_orbit": po.encode(), "failure": res.encode(system)})
        else:
            break
    if len(certified_failures) == len(delta_grid):
        return Verdict("shadowable_point", Outcome.FAILS, params, witness=certified_failures[-1], horizon=length,
                       seed=seed)
    return Verdict("shadowable_point", Outcome.INCONCLUSIVE, params, horizon=length, seed=seed)
