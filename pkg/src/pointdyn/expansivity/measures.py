"""Measures on shift cylinders (exact) and Monte-Carlo ball measures (Wilson interval)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from ..errors import BudgetExceeded, MeasureSystemMismatch, NotACover, PreconditionError
from ..exact import as_fraction
from ..systems.base import System, rng_for
from ..systems.symbolic import Cylinder, _ShiftBase
from ..verdict import Outcome, Verdict, encode, shard_seed
from .balls import DynamicalBall

Z95 = 1.959963984540054
MAX_COVER = 8
MAX_GENERATOR_HORIZON = 10
MAX_COVER_SEQUENCES = 100_000


class BernoulliMeasure:
    def __init__(self, probs):
        self.probs = tuple(as_fraction(p) for p in probs)
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise PreconditionError("Bernoulli weights must be non-negative and sum to 1")
        self.k = len(self.probs)

    def cylinder_measure(self, cyl: Cylinder) -> Fraction:
        out = Fraction(1)
        for _, s in cyl.constraints:
            out *= self.probs[s]
        return out

    @property
    def max_step(self) -> Fraction:
        return max(self.probs)

    def encode(self):
        return {"bernoulli": [encode(p) for p in self.probs]}


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _matpow(a, e):
    n = len(a)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            out = _matmul(out, a)
        a = _matmul(a, a)
        e >>= 1
    return out


class MarkovMeasure:
    """Stationary Markov measure given a stochastic matrix P and pi with pi P = pi."""

    def __init__(self, matrix, stationary):
        self.P = [[as_fraction(v) for v in row] for row in matrix]
        self.pi = [as_fraction(v) for v in stationary]
        self.k = len(self.pi)
        if any(len(row) != self.k or sum(row) != 1 or min(row) < 0 for row in self.P):
            raise PreconditionError("rows must be probability vectors")
        if sum(self.pi) != 1 or min(self.pi) < 0:
            raise PreconditionError("stationary vector must be a probability vector")
        piP = [sum(self.pi[i] * self.P[i][j] for i in range(self.k)) for j in range(self.k)]
        if piP != self.pi:
            raise PreconditionError("pi P != pi")

    def cylinder_measure(self, cyl: Cylinder) -> Fraction:
        cons = cyl.constraints
        if not cons:
            return Fraction(1)
        (p0, s0), rest = cons[0], cons[1:]
        out = self.pi[s0]
        prev_p, prev_s = p0, s0
        for p, s in rest:
            out *= _matpow(self.P, p - prev_p)[prev_s][s]
            prev_p, prev_s = p, s
        return out

    @property
    def max_step(self) -> Fraction:
        return max(max(row) for row in self.P)

    def encode(self):
        return {"markov": {"P": encode(self.P), "pi": encode(self.pi)}}


@dataclass(frozen=True)
class EmpiricalSampler:
    """Normalized reference measure on ``region``: uniform samples from system.sample."""

    system: System
    region: object
    seed: int = 0
    samples: int = 100_000
    shards: int = 1

    def draw(self) -> list:
        per = -(-self.samples // self.shards)
        out = []
        for i in range(self.shards):
            out.extend(self.system.sample(self.region, per, shard_seed(self.seed, i)))
        return out[: self.samples]


def wilson_interval(hits: int, n: int, z: float = Z95) -> tuple:
    """(centre, half-width) of the Wilson score interval."""
    if n <= 0:
        raise PreconditionError("no samples")
    phat = hits / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return centre, half


def measure_of_ball(measure, ball: DynamicalBall, system: System | None = None):
    """Exact rational for cylinder balls; (estimate, 95% half-width) for sampled ones."""
    if ball.cylinder is not None:
        if isinstance(measure, EmpiricalSampler):
            raise MeasureSystemMismatch("cylinder balls take Bernoulli or Markov measures")
        if ball.cylinder.constraints and max(s for _, s in ball.cylinder.constraints) >= measure.k:
            raise MeasureSystemMismatch("cylinder symbols outside the measure's alphabet")
        return measure.cylinder_measure(ball.cylinder)
    if not isinstance(measure, EmpiricalSampler):
        raise MeasureSystemMismatch("explicit balls need an empirical sampler")
    system = system or measure.system
    pts = measure.draw()
    hits = sum(1 for y in pts if ball.contains(system, y))
    return wilson_interval(hits, len(pts))


def mu_generator_check(system: _ShiftBase, cover, x, measure, T: int, sample_checks: int = 256,
                       seed: int = 0) -> Verdict:
    """Measures of the orbit-wise intersections of a clopen cylinder cover along x.

    Every bi-sequence (U_n), |n| <= T, with f^n(x) in U_n is enumerated; the
    intersection of f^-n(U_n) is a cylinder whose measure is exact. Holds when
    all intersections have measure <= q^T (q = largest one-step probability).
    """
    if not isinstance(system, _ShiftBase):
        raise PreconditionError("generator checks run on shifts")
    cover = [system.to_cylinder(c) for c in cover]
    if not cover or len(cover) > MAX_COVER:
        raise PreconditionError(f"cover size must be in 1..{MAX_COVER}")
    if not 0 <= T <= MAX_GENERATOR_HORIZON:
        raise PreconditionError(f"T must be in 0..{MAX_GENERATOR_HORIZON}")
    for y in system.sample(None, sample_checks, seed):
        if not any(c.contains(y) for c in cover):
            raise NotACover(f"{system.encode_point(y)} lies in no cover element")
    times = range(-T, T + 1) if system.caps.invertible else range(0, 2 * T + 1)
    admissible = []
    for n in times:
        fx = system.iterate(x, n)
        admissible.append([i for i, c in enumerate(cover) if c.contains(fx)])
    total = math.prod(len(a) for a in admissible)
    if total > MAX_COVER_SEQUENCES:
        raise BudgetExceeded(f"{total} cover sequences exceed {MAX_COVER_SEQUENCES}")
    worst, worst_seq = Fraction(-1), None
    for choice in product(*admissible):
        cyl = Cylinder()
        for n, i in zip(times, choice):
            cyl = cyl.intersect(cover[i].preimage(n))
        m = measure.cylinder_measure(cyl)
        if m > worst:
            worst, worst_seq = m, choice
    bound = measure.max_step ** T
    params = {"cover": [c.encode() for c in cover], "x": system.encode_point(x), "T": T, "measure": measure.encode()}
    details = {"max_measure": worst, "bound": bound, "sequences": total}
    if worst == 0:
        outcome = Outcome.HOLDS
    elif T == 0:
        outcome = Outcome.INCONCLUSIVE
    else:
        outcome = Outcome.HOLDS if worst <= bound else Outcome.FAILS
    witness = None if outcome is Outcome.HOLDS else {"sequence": list(worst_seq), "measure": worst}
    return Verdict("mu_generator", outcome, params, witness=witness, horizon=T, seed=seed, details=details)
