"""Interval maps on scalars: doubling ray, squaring map, doubling circle, tent map.

Points are Fractions (exact) or floats (inexact fallback). Interval images
are exact and follow the closure convention.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..errors import DomainViolation, EmptyRegion, MixedSystemPoints, PreconditionError
from ..exact import as_fraction, is_exact, round_down, sqrt_down, sqrt_up
from ..intervals import Interval, merge
from .base import Ball, Capabilities, System, rng_for

SAMPLE_BITS = 40


class ScalarSystem(System):
    domain: Interval = Interval(0, 1)
    monotone_increasing = False

    def check_point(self, p):
        if isinstance(p, bool) or not isinstance(p, (int, Fraction, float)):
            raise MixedSystemPoints(f"{type(p).__name__} is not a point of {self.id}")
        if not self.domain.contains(Fraction(p) if isinstance(p, float) and math.isfinite(p) else p):
            raise DomainViolation(f"{p} outside {self.domain.encode()}")

    def decode_point(self, data):
        if isinstance(data, str):
            return as_fraction(data)
        return data

    def distance(self, p, q):
        return abs(p - q)

    @property
    def diameter(self):
        return self.domain.hi - self.domain.lo

    # -- regions ------------------------------------------------------
    def sampling_window(self) -> Interval:
        return self.domain

    def to_interval(self, region) -> Interval:
        if region is None:
            return self.sampling_window()
        if isinstance(region, Interval):
            return region.intersect(self.domain)
        if isinstance(region, Ball):
            c, r = region.center, region.radius
            iv = Interval(c - r, c + r, not region.open, not region.open)
            return iv.intersect(self.domain)
        raise PreconditionError(f"{type(region).__name__} is not an interval region")

    def region_contains(self, region, p):
        if isinstance(region, Ball):
            return super().region_contains(region, p)
        return self.to_interval(region).contains(p)

    def sample(self, region, count, seed):
        iv = self.to_interval(region)
        if math.isinf(iv.hi):
            iv = iv.intersect(self.sampling_window())
        if iv.is_empty() or iv.lo == iv.hi:
            raise EmptyRegion(f"cannot sample from {iv.encode()}")
        rng = rng_for(seed)
        scale = 1 << SAMPLE_BITS
        out = []
        while len(out) < count:
            u = Fraction(int(rng.integers(1, scale)), scale)
            x = iv.lo + u * (iv.hi - iv.lo)
            x = round_down(x, SAMPLE_BITS + 8)
            if iv.contains(x) and self.domain.contains(x):
                out.append(x)
        return out

    def neighbors(self, x, radius, budget, seed):
        radius = as_fraction(radius)
        out, seen = [], {x}

        def add(y):
            if y not in seen and self.domain.contains(y) and self.distance(x, y) <= radius:
                seen.add(y)
                out.append(y)

        k = 0
        while len(out) < budget // 2 and k < 64:
            step = radius / (1 << k)
            add(self._wrap(x + step))
            add(self._wrap(x - step))
            k += 1
        rng = rng_for(seed)
        scale = 1 << SAMPLE_BITS
        tries = 0
        while len(out) < budget and tries < 4 * budget:
            tries += 1
            u = Fraction(int(rng.integers(-scale, scale + 1)), scale)
            add(self._wrap(x + u * radius))
        return out

    def _wrap(self, y):
        return y

    # -- images -------------------------------------------------------
    def map_interval(self, iv: Interval) -> list:
        raise NotImplementedError

    def interval_image(self, region, n=1):
        pieces = [self.to_interval(region).closure()]
        for _ in range(n):
            pieces = merge(q for p in pieces for q in self.map_interval(p))
        return pieces

    def image_bounds(self, pieces, bits=None, inward=False) -> list:
        """One application of f to a union of closed pieces, optionally rounded."""
        out = merge(q for p in pieces for q in self.map_interval(p))
        if bits is None:
            return out
        rounded = [p.round_inward(bits) if inward else p.round_outward(bits) for p in out]
        return merge(p.intersect(self.domain.closure()) for p in rounded)

    def preimage_pieces(self, iv: Interval, bits: int = 64) -> list:
        """Closed pieces whose union lies inside f^{-1}(iv)."""
        raise NotImplementedError

    def ball_pieces(self, center, radius) -> list:
        """The closed ball of the given radius as closed pieces of the domain."""
        iv = Interval(center - radius, center + radius).intersect(self.domain.closure())
        return [] if iv.is_empty() else [iv]

    def pull_back(self, target, n: int, bits: int = 256):
        """A point z with f^n(z) close to target (exact when the branch inverse is rational)."""
        z = as_fraction(target)
        for _ in range(n):
            z = self._branch_inverse(z, bits)
        return z

    def _branch_inverse(self, z, bits):
        raise NotImplementedError

    def is_forward_invariant(self, iv: Interval) -> bool:
        return all(p.issubset(iv) for p in self.map_interval(iv.closure()))

    # -- float fast path ----------------------------------------------
    def map_array(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def all_periodic_points(self):
        """Per(f) when it is a known finite set, else None."""
        return None


class DoublingRay(ScalarSystem):
    """f(x) = 2x on [0, inf).

    The domain is unbounded; sampling uses the window [0, W].
    """

    id = "doubling_ray"
    caps = Capabilities(invertible=True, exact_interval_image=True, enumerates_periodic=True, compact=False)
    monotone_increasing = True

    def __init__(self, window=2 ** 20):
        self.window = as_fraction(window)
        self.domain = Interval(0, math.inf, True, False)

    def descriptor(self):
        return {"id": self.id, "window": self.window}

    @property
    def diameter(self):
        return math.inf

    def sampling_window(self):
        return Interval(0, self.window)

    def map(self, p):
        return 2 * p

    def inverse(self, p):
        return p / 2

    def map_interval(self, iv):
        return [Interval(2 * iv.lo, 2 * iv.hi)]

    def preimage_inner(self, iv: Interval, bits=None) -> Interval:
        return Interval(iv.lo / 2, iv.hi / 2, iv.lo_closed, iv.hi_closed).intersect(self.domain)

    def preimage_pieces(self, iv, bits=64):
        out = self.preimage_inner(iv)
        return [] if out.is_empty() else [out]

    def _branch_inverse(self, z, bits):
        return z / 2

    def periodic_points(self, period):
        return [Fraction(0)]

    def all_periodic_points(self):
        return [Fraction(0)]

    def periodic_points_complete(self):
        return True

    def map_array(self, x):
        return 2.0 * x


class SquaringMap(ScalarSystem):
    """f(x) = x**2 on [0, 1]."""

    id = "squaring"
    caps = Capabilities(invertible=False, exact_interval_image=True, enumerates_periodic=True, compact=True)
    monotone_increasing = True
    domain = Interval(0, 1)

    def map(self, p):
        return p * p

    def map_interval(self, iv):
        return [Interval(iv.lo * iv.lo, iv.hi * iv.hi)]

    def preimage_inner(self, iv: Interval, bits=64) -> Interval:
        """Closed subset of f^{-1}(iv) with dyadic endpoints (sqrt rounded inward)."""
        iv = iv.intersect(self.domain)
        if iv.is_empty():
            return iv
        lo = sqrt_up(iv.lo, bits) if iv.lo > 0 else Fraction(0)
        hi = sqrt_down(iv.hi, bits)
        lc = iv.lo_closed or lo * lo != iv.lo
        hc = iv.hi_closed or hi * hi != iv.hi
        return Interval(lo, hi, lc, hc)

    def preimage_pieces(self, iv, bits=64):
        out = self.preimage_inner(iv.closure(), bits)
        return [] if out.is_empty() else [out]

    def _branch_inverse(self, z, bits):
        return sqrt_down(z, bits)

    def periodic_points(self, period):
        return [Fraction(0), Fraction(1)]

    def all_periodic_points(self):
        return [Fraction(0), Fraction(1)]

    def periodic_points_complete(self):
        return True

    def map_array(self, x):
        return x * x


class DoublingCircle(ScalarSystem):
    """x -> 2x mod 1 on the circle R/Z, points represented in [0, 1)."""

    id = "doubling_circle"
    caps = Capabilities(invertible=False, exact_interval_image=True, enumerates_periodic=True, compact=True)
    domain = Interval(0, 1, True, False)

    def check_point(self, p):
        super().check_point(p)

    def _wrap(self, y):
        return y % 1

    def map(self, p):
        return (2 * p) % 1

    def distance(self, p, q):
        d = abs(p - q) % 1
        return min(d, 1 - d)

    @property
    def diameter(self):
        return Fraction(1, 2)

    def to_interval(self, region):
        if isinstance(region, Ball):
            c, r = region.center, region.radius
            return Interval(c - r, c + r, not region.open, not region.open)
        if region is None:
            return self.domain
        return region

    def region_contains(self, region, p):
        if isinstance(region, Ball):
            return System.region_contains(self, region, p)
        iv = self.to_interval(region)
        return any(iv.contains(p + k) for k in (-1, 0, 1))

    def sample(self, region, count, seed):
        iv = self.to_interval(region)
        if iv.is_empty() or iv.lo == iv.hi:
            raise EmptyRegion(f"cannot sample from {iv.encode()}")
        rng = rng_for(seed)
        scale = 1 << SAMPLE_BITS
        out = []
        while len(out) < count:
            u = Fraction(int(rng.integers(1, scale)), scale)
            x = iv.lo + u * (iv.hi - iv.lo)
            if iv.contains(x):
                out.append(x % 1)
        return out

    def arcs(self, iv: Interval) -> list:
        """Split a closed interval of R into closed pieces of [0, 1]."""
        if iv.hi - iv.lo >= 1:
            return [Interval(0, 1)]
        k = math.floor(iv.lo)
        lo, hi = iv.lo - k, iv.hi - k
        if hi <= 1:
            return [Interval(lo, hi)]
        return [Interval(lo, 1), Interval(0, hi - 1)]

    def map_interval(self, iv):
        return self.arcs(Interval(2 * iv.lo, 2 * iv.hi))

    def interval_image(self, region, n=1):
        pieces = self.arcs(self.to_interval(region).closure())
        for _ in range(n):
            pieces = merge(q for p in pieces for q in self.map_interval(p))
        return pieces

    def ball_pieces(self, center, radius):
        return self.arcs(Interval(center - radius, center + radius))

    def preimage_pieces(self, iv, bits=64):
        iv = iv.closure()
        return merge([Interval(iv.lo / 2, iv.hi / 2), Interval((iv.lo + 1) / 2, (iv.hi + 1) / 2)])

    def _branch_inverse(self, z, bits):
        return z / 2

    def periodic_points(self, period):
        m = (1 << period) - 1
        return [Fraction(j, m) for j in range(m)]

    def periodic_points_complete(self):
        return True

    def backward_trace(self, points):
        """Tracer for a finite pseudo-orbit by pulling back along the nearest branch."""
        y = points[-1]
        for target in reversed(points[:-1]):
            a, b = y / 2, (y + 1) / 2
            y = a if self.distance(a, target) <= self.distance(b, target) else b
        return y

    def map_array(self, x):
        return np.mod(2.0 * x, 1.0)


class TentMap(ScalarSystem):
    """f(x) = 2x on [0, 1/2], 2 - 2x on [1/2, 1]."""

    id = "tent"
    caps = Capabilities(invertible=False, exact_interval_image=True, enumerates_periodic=False, compact=True)
    domain = Interval(0, 1)
    KINK = Fraction(1, 2)

    def map(self, p):
        return 2 * p if p <= self.KINK else 2 - 2 * p

    def map_interval(self, iv):
        pieces = []
        if iv.lo <= self.KINK:
            hi = min(iv.hi, self.KINK)
            pieces.append(Interval(2 * iv.lo, 2 * hi))
        if iv.hi >= self.KINK:
            lo = max(iv.lo, self.KINK)
            pieces.append(Interval(2 - 2 * iv.hi, 2 - 2 * lo))
        return merge(pieces)

    def preimage_pieces(self, iv, bits=64):
        iv = iv.closure().intersect(self.domain)
        if iv.is_empty():
            return []
        return merge([Interval(iv.lo / 2, iv.hi / 2), Interval(1 - iv.hi / 2, 1 - iv.lo / 2)])

    def _branch_inverse(self, z, bits):
        return z / 2

    def map_array(self, x):
        return np.where(x <= 0.5, 2.0 * x, 2.0 - 2.0 * x)


class IdentityInterval(ScalarSystem):
    """The identity map on [0, 1]; every point is fixed."""

    id = "identity_interval"
    caps = Capabilities(invertible=True, exact_interval_image=True, compact=True)
    monotone_increasing = True
    domain = Interval(0, 1)

    def map(self, p):
        return p

    def inverse(self, p):
        return p

    def map_interval(self, iv):
        return [iv.closure()]

    def preimage_inner(self, iv, bits=None):
        return iv.intersect(self.domain)

    def preimage_pieces(self, iv, bits=64):
        out = iv.closure().intersect(self.domain)
        return [] if out.is_empty() else [out]

    def _branch_inverse(self, z, bits):
        return z

    def map_array(self, x):
        return x
