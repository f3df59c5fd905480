"""The dynamical-system protocol and the thin functional wrappers around it."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ..errors import (
    CapabilityMissing,
    MixedSystemPoints,
    NegativeIterateOnNonInvertible,
    PreconditionError,
)


@dataclass(frozen=True)
class Capabilities:
    invertible: bool = False
    exact_symbolic: bool = False
    exact_interval_image: bool = False
    enumerates_periodic: bool = False
    compact: bool = False


@dataclass(frozen=True)
class Ball:
    """Metric ball region; open by default (d < radius)."""

    center: Any
    radius: Fraction
    open: bool = True

    def __post_init__(self):
        from ..exact import as_fraction

        r = as_fraction(self.radius)
        if r <= 0:
            raise PreconditionError("ball radius must be positive")
        object.__setattr__(self, "radius", r)

    def encode(self):
        from ..verdict import encode

        return {"ball": {"center": encode(self.center), "radius": encode(self.radius), "open": self.open}}


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & ((1 << 64) - 1)))


class System:
    """Base class; concrete systems override what their capabilities promise.

    Points are immutable values (Fractions, symbol sequences, tagged tuples),
    so systems carry no mutable state and are safe to share across threads.
    """

    id: str = "abstract"
    caps: Capabilities = Capabilities()
    point_types: tuple = ()

    # -- points ---------------------------------------------------------
    def check_point(self, p) -> None:
        if self.point_types and not isinstance(p, self.point_types):
            raise MixedSystemPoints(f"{type(p).__name__} is not a point of {self.id}")

    def encode_point(self, p) -> Any:
        from ..verdict import encode

        return encode(p)

    def decode_point(self, data):
        raise NotImplementedError

    # -- dynamics -------------------------------------------------------
    def map(self, p):
        raise NotImplementedError

    def inverse(self, p):
        raise NegativeIterateOnNonInvertible(f"{self.id} is not invertible")

    def iterate(self, p, n: int):
        self.check_point(p)
        if n < 0 and not self.caps.invertible:
            raise NegativeIterateOnNonInvertible(f"{self.id} has no inverse; n={n}")
        step = self.map if n >= 0 else self.inverse
        for _ in range(abs(n)):
            p = step(p)
        return p

    def orbit(self, p, n: int) -> list:
        """[p, f(p), ..., f^{n-1}(p)]"""
        out = [p]
        for _ in range(n - 1):
            out.append(self.map(out[-1]))
        return out

    def orbit_window(self, p, lo: int, hi: int) -> dict:
        """{i: f^i(p)} for lo <= i <= hi (negative i needs an inverse)."""
        out = {0: p}
        q = p
        for i in range(1, hi + 1):
            q = self.map(q)
            out[i] = q
        if lo < 0:
            q = self.iterate(p, -1)
            out[-1] = q
            for i in range(2, -lo + 1):
                q = self.inverse(q)
                out[-i] = q
        return {i: out[i] for i in range(lo, hi + 1)}

    def distance(self, p, q):
        raise NotImplementedError

    @property
    def diameter(self):
        raise NotImplementedError

    # -- regions and candidates ----------------------------------------
    def region_contains(self, region, p) -> bool:
        if isinstance(region, Ball):
            d = self.distance(region.center, p)
            return d < region.radius if region.open else d <= region.radius
        raise CapabilityMissing(f"{self.id} cannot test {type(region).__name__}")

    def sample(self, region, count: int, seed: int) -> list:
        raise CapabilityMissing(f"{self.id} has no sampler")

    def neighbors(self, x, radius, budget: int, seed: int) -> list:
        """Candidate points y != x with d(x, y) <= radius (structured + random)."""
        return []

    def periodic_points(self, period: int) -> list:
        raise CapabilityMissing(f"{self.id} does not enumerate periodic points")

    def periodic_points_complete(self) -> bool:
        """True when periodic_points lists Per(f) exactly for every period."""
        return False

    def interval_image(self, region, n: int = 1):
        raise CapabilityMissing(f"{self.id} has no exact interval images")

    def descriptor(self) -> dict:
        return {"id": self.id}

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor()}>"


def iterate(system: System, p, n: int):
    """f^n(p); negative n requires an invertible system."""
    return system.iterate(p, n)


def distance(system: System, p, q):
    system.check_point(p)
    system.check_point(q)
    return system.distance(p, q)


def interval_image(system: System, region, n: int = 1):
    if not system.caps.exact_interval_image:
        raise CapabilityMissing(f"{system.id} has no exact interval images")
    if n < 1:
        raise PreconditionError("n must be positive")
    return system.interval_image(region, n)


def periodic_points(system: System, period: int) -> list:
    if not system.caps.enumerates_periodic:
        raise CapabilityMissing(f"{system.id} does not enumerate periodic points")
    if period < 1:
        raise PreconditionError("period must be positive")
    return system.periodic_points(period)


def sample(system: System, region, count: int, seed: int) -> list:
    if count < 1:
        raise PreconditionError("count must be positive")
    return system.sample(region, count, seed)


def prime_period(system: System, p, bound: int = 4096) -> int | None:
    q = p
    for n in range(1, bound + 1):
        q = system.map(q)
        if q == p:
            return n
    return None


def orbit_distance(system: System, x, q, period: int):
    """d(x, O(q)) for a periodic q with the given period."""
    best = None
    z = q
    for _ in range(period):
        d = system.distance(x, z)
        best = d if best is None or d < best else best
        z = system.map(z)
    return best
