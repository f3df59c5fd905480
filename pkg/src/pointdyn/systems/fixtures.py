"""Two counterexample systems built from other systems.

The orbit cloud attaches to a base homeomorphism countably many tagged points
q(i, k, j) that rotate along a periodic orbit of the base and accumulate on it.
The accumulating sequence space is the identity on the points tanh(i), i in Z,
optionally together with their two limits a = 1 and b = -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import (
    DomainViolation,
    MixedSystemPoints,
    NotPeriodic,
    PeriodNotPrime,
    PreconditionError,
)
from .base import Ball, Capabilities, System, prime_period, rng_for
from .symbolic import FullShift, SymSeq

CLOUD_INDICES = (1, 2, 3)


@dataclass(frozen=True, order=True)
class CloudPoint:
    """The tagged point q(i, k, j): index i in {1,2,3}, level k >= 1, phase j."""

    i: int
    k: int
    j: int

    def encode(self) -> str:
        return f"q({self.i},{self.k},{self.j})"

    @classmethod
    def decode(cls, text: str) -> "CloudPoint":
        inner = text.strip()[2:-1]
        i, k, j = (int(s) for s in inner.split(","))
        return cls(i, k, j)


class OrbitCloudSystem(System):
    """X = Y u E with the six-case metric; f = g on Y and rotates the phase on E.

    When i != l the formula 1/k is only defined for q(i,k,j), q(l,k,j); every
    other pair of distinct cloud points uses 1/k + 1/m + d0(g^j p, g^r p).
    """

    id = "orbit_cloud"

    def __init__(self, base: System | None = None, p=None, t: int | None = None, levels: int = 64):
        base = base if base is not None else FullShift(2)
        p = p if p is not None else SymSeq.periodic((0, 1))
        base.check_point(p)
        period = prime_period(base, p, bound=t if t is not None else 4096)
        if period is None or (t is not None and base.iterate(p, t) != p):
            raise NotPeriodic(f"{base.encode_point(p)} is not periodic with period {t}")
        if t is None:
            t = period
        elif period < t:
            raise PeriodNotPrime(f"f^{period}(p) = p with {period} < {t}")
        self.base, self.p, self.t, self.levels = base, p, t, levels
        self.p_orbit = base.orbit(p, t)
        self.caps = Capabilities(
            invertible=base.caps.invertible,
            exact_symbolic=base.caps.exact_symbolic,
            enumerates_periodic=base.caps.enumerates_periodic,
            compact=base.caps.compact,
        )

    def descriptor(self):
        return {"id": self.id, "base": self.base.descriptor(), "p": self.base.encode_point(self.p), "t": self.t,
                "levels": self.levels}

    def check_point(self, x):
        if isinstance(x, CloudPoint):
            if x.i not in CLOUD_INDICES or x.k < 1 or not 0 <= x.j < self.t:
                raise DomainViolation(f"{x.encode()} outside the cloud index set")
            return
        try:
            self.base.check_point(x)
        except MixedSystemPoints:
            raise MixedSystemPoints(f"{type(x).__name__} is not a point of {self.id}") from None

    def encode_point(self, x):
        return x.encode() if isinstance(x, CloudPoint) else self.base.encode_point(x)

    def decode_point(self, data):
        if isinstance(data, str) and data.startswith("q("):
            return CloudPoint.decode(data)
        return self.base.decode_point(data)

    def map(self, x):
        if isinstance(x, CloudPoint):
            return CloudPoint(x.i, x.k, (x.j + 1) % self.t)
        return self.base.map(x)

    def inverse(self, x):
        if isinstance(x, CloudPoint):
            return CloudPoint(x.i, x.k, (x.j - 1) % self.t)
        return self.base.inverse(x)

    def distance(self, a, b):
        if a == b:
            return Fraction(0)
        d0 = self.base.distance
        a_cloud, b_cloud = isinstance(a, CloudPoint), isinstance(b, CloudPoint)
        if not a_cloud and not b_cloud:
            return d0(a, b)
        if a_cloud and not b_cloud:
            return Fraction(1, a.k) + d0(self.p_orbit[a.j], b)
        if b_cloud and not a_cloud:
            return Fraction(1, b.k) + d0(a, self.p_orbit[b.j])
        if a.i != b.i and a.k == b.k and a.j == b.j:
            return Fraction(1, a.k)
        return Fraction(1, a.k) + Fraction(1, b.k) + d0(self.p_orbit[a.j], self.p_orbit[b.j])

    @property
    def diameter(self):
        return 2 + self.base.diameter

    def cloud_points(self, max_level: int | None = None) -> list:
        top = max_level or self.levels
        return [CloudPoint(i, k, j) for k in range(1, top + 1) for i in CLOUD_INDICES for j in range(self.t)]

    def neighbors(self, x, radius, budget, seed):
        radius = Fraction(radius)
        out = []
        if not isinstance(x, CloudPoint):
            out.extend(self.base.neighbors(x, radius, budget // 2, seed))
        # cloud points are at distance >= 1/k from anything else, so levels
        # above 1/radius are the only candidates
        k = max(1, math.ceil(1 / radius))
        for level in range(k, k + budget):
            for i in CLOUD_INDICES:
                for j in range(self.t):
                    q = CloudPoint(i, level, j)
                    if q != x and self.distance(x, q) <= radius:
                        out.append(q)
            if len(out) >= budget:
                break
        return out[:budget]

    def sample(self, region, count, seed):
        if not isinstance(region, Ball):
            raise PreconditionError("orbit cloud regions are balls")
        pool = [region.center] + self.neighbors(region.center, region.radius, 4 * count, seed)
        pool = [q for q in pool if self.region_contains(region, q)]
        rng = rng_for(seed)
        return [pool[int(rng.integers(0, len(pool)))] for _ in range(count)]

    def periodic_points(self, period):
        pts = list(self.base.periodic_points(period))
        if period % self.t == 0:
            pts.extend(self.cloud_points())
        return pts


# -- accumulating sequence space ----------------------------------------

LIMIT_A, LIMIT_B = "a", "b"
MAX_INDEX = 350  # cosh(350)**2 stays below the double range


def _value_gap(i: int, j: int) -> float:
    """|tanh i - tanh j| without cancellation."""
    return abs(math.sinh(i - j)) / (math.cosh(i) * math.cosh(j))


class AccumulatingSequenceSpace(System):
    """Identity map on {tanh(i) : i in Z}, plus the limits a = 1, b = -1 when included.

    Points are Python ints i (standing for tanh(i)) or the strings "a", "b".
    """

    def __init__(self, include_limits: bool = True):
        self.include_limits = include_limits
        self.id = "accumulating_space" if include_limits else "accumulating_space_open"
        self.caps = Capabilities(invertible=True, enumerates_periodic=True, compact=include_limits)

    def descriptor(self):
        return {"id": self.id, "include_limits": self.include_limits}

    def check_point(self, x):
        if x in (LIMIT_A, LIMIT_B):
            if not self.include_limits:
                raise DomainViolation(f"limit point {x} is not in the punctured space")
            return
        if isinstance(x, bool) or not isinstance(x, int):
            raise MixedSystemPoints(f"{type(x).__name__} is not a point of {self.id}")
        if abs(x) > MAX_INDEX:
            raise DomainViolation(f"index {x} beyond {MAX_INDEX}")

    def encode_point(self, x):
        return x if isinstance(x, str) else f"x{x}"

    def decode_point(self, data):
        if data in (LIMIT_A, LIMIT_B):
            return data
        return int(str(data).lstrip("x"))

    def value(self, x) -> float:
        return {LIMIT_A: 1.0, LIMIT_B: -1.0}.get(x) if isinstance(x, str) else math.tanh(x)

    def map(self, x):
        return x

    def inverse(self, x):
        return x

    def distance(self, x, y):
        if x == y:
            return 0.0
        if isinstance(x, str) and isinstance(y, str):
            return 2.0
        if isinstance(x, str):
            x, y = y, x
        if isinstance(y, str):
            return self._gap_to_limit(x, y)
        return _value_gap(x, y)

    @property
    def diameter(self):
        return 2.0

    def ball_members(self, x, delta, cap: int = MAX_INDEX):
        """Closed ball B[x, delta] as (finite sorted members, infinite_tails).

        ``infinite_tails`` names the ends ("+", "-") from which infinitely many
        x_i lie in the ball; members lists everything with |i| <= cap.
        """
        delta = float(delta)
        tails = [tag for limit, tag in ((LIMIT_A, "+"), (LIMIT_B, "-")) if self._gap_to_limit(x, limit) <= delta]
        members = [i for i in range(-cap, cap + 1) if self.distance(x, i) <= delta]
        if self.include_limits:
            members += [s for s in (LIMIT_A, LIMIT_B) if self.distance(x, s) <= delta]
        return members, tails

    def _gap_to_limit(self, x, limit) -> float:
        # 1 - tanh i = e^-i / cosh i and 1 + tanh i = e^i / cosh i;
        # the x_i accumulate on the limit whether or not it belongs to the space
        if x == limit:
            return 0.0
        if isinstance(x, str):
            return 2.0
        sign = -1 if limit == LIMIT_A else 1
        return math.exp(sign * x) / math.cosh(x)

    def neighbors(self, x, radius, budget, seed):
        members, _ = self.ball_members(x, radius)
        out = [m for m in members if m != x]
        if isinstance(x, int):
            out.sort(key=lambda m: abs(m - x) if isinstance(m, int) else MAX_INDEX)
        return out[:budget]

    def sample(self, region, count, seed):
        if not isinstance(region, Ball):
            raise PreconditionError("accumulating space regions are balls")
        members, _ = self.ball_members(region.center, region.radius)
        members = [m for m in members if self.region_contains(region, m)]
        rng = rng_for(seed)
        return [members[int(rng.integers(0, len(members)))] for _ in range(count)]

    def periodic_points(self, period, cap: int = 64):
        """Every point is fixed; lists x_i for |i| <= cap and the limits."""
        limits = [LIMIT_A, LIMIT_B] if self.include_limits else []
        return limits + list(range(-cap, cap + 1))

    def min_gap(self, x) -> float:
        """Distance from x to the nearest other point (0 at a limit)."""
        if isinstance(x, str):
            return 0.0
        return min(self.distance(x, x - 1), self.distance(x, x + 1))
