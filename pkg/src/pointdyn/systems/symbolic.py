"""Full shifts on eventually periodic symbol sequences.

A two-sided point is stored as ``left^inf . core . right^inf`` with the
core starting at coordinate ``offset``. The form is canonicalised on
construction, so equality and hashing are structural. The shift acts on
``offset`` only, which keeps f and its inverse exact.

The metric is d(x, y) = 2**-min{|n| : x_n != y_n} (one-sided: min over
n >= 0), so a ball is a cylinder around coordinate 0.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product
from typing import Iterable

from ..errors import EmptyRegion, MixedSystemPoints, PreconditionError
from ..exact import as_fraction, log2_floor
from .base import Ball, Capabilities, System, rng_for


def _primitive(word: tuple) -> tuple:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return word[:p]
    return word


def _rot_right(word: tuple) -> tuple:
    return (word[-1],) + word[:-1]


def _rot_left(word: tuple) -> tuple:
    return word[1:] + (word[0],)


class SymSeq:
    """Eventually periodic bi-infinite sequence over {0, ..., 9}."""

    __slots__ = ("left", "core", "right", "offset", "_hash")

    def __init__(self, left, core, right, offset: int = 0):
        left, core, right = tuple(left), tuple(core), tuple(right)
        if not left or not right:
            raise PreconditionError("periods must be non-empty")
        left, right = _primitive(left), _primitive(right)
        offset = int(offset)
        # pull the right tail as far left as it goes
        while core and core[-1] == right[-1]:
            core = core[:-1]
            right = _rot_right(right)
        if not core:
            guard = len(left) * len(right) + len(left) + len(right)
            while left != right and left[-1] == right[-1] and guard > 0:
                left, right = _rot_right(left), _rot_right(right)
                offset -= 1
                guard -= 1
            if left == right:
                # purely periodic: pin the period word to coordinate 0
                p = len(right)
                right = tuple(right[(i - offset) % p] for i in range(p))
                left, offset = right, 0
        while core and core[0] == left[0]:
            left = _rot_left(left)
            core = core[1:]
            offset += 1
        self.left, self.core, self.right, self.offset = left, core, right, offset
        self._hash = hash((left, core, right, offset))

    # -- constructors ---------------------------------------------------
    @classmethod
    def periodic(cls, word, start: int = 0) -> "SymSeq":
        word = tuple(word)
        return cls(word, (), word, start)

    @classmethod
    def constant(cls, symbol: int) -> "SymSeq":
        return cls((symbol,), (), (symbol,), 0)

    @classmethod
    def from_window(cls, lo: int, word, fill: int = 0) -> "SymSeq":
        return cls((fill,), tuple(word), (fill,), lo)

    @classmethod
    def splice(cls, left_seq: "SymSeq", cut: int, right_seq: "SymSeq") -> "SymSeq":
        """Coordinates n < cut from left_seq, n >= cut from right_seq."""
        a = min(cut, left_seq.offset)
        b = max(cut, right_seq.end)
        lw = left_seq.window(a - len(left_seq.left), a - 1)
        rw = right_seq.window(b, b + len(right_seq.right) - 1)
        core = tuple(left_seq[n] if n < cut else right_seq[n] for n in range(a, b))
        return cls(lw, core, rw, a)

    def with_coords(self, coords: dict) -> "SymSeq":
        if not coords:
            return self
        a = min(min(coords), self.offset)
        b = max(max(coords) + 1, self.end)
        lw = self.window(a - len(self.left), a - 1)
        rw = self.window(b, b + len(self.right) - 1)
        core = tuple(coords.get(n, self[n]) for n in range(a, b))
        return SymSeq(lw, core, rw, a)

    # -- access ---------------------------------------------------------
    @property
    def end(self) -> int:
        return self.offset + len(self.core)

    def __getitem__(self, n: int) -> int:
        if n < self.offset:
            return self.left[(n - self.offset) % len(self.left)]
        k = n - self.offset
        if k < len(self.core):
            return self.core[k]
        return self.right[(k - len(self.core)) % len(self.right)]

    def window(self, lo: int, hi: int) -> tuple:
        return tuple(self[n] for n in range(lo, hi + 1))

    def shift(self, k: int = 1) -> "SymSeq":
        return SymSeq(self.left, self.core, self.right, self.offset - k)

    def is_periodic(self) -> bool:
        return not self.core and self.left == self.right

    def period(self) -> int | None:
        return len(self.right) if self.is_periodic() else None

    def symbols(self) -> set:
        return set(self.left) | set(self.core) | set(self.right)

    def first_disagreement(self, other: "SymSeq") -> int | None:
        """min{|n| : self_n != other_n}, or None when equal."""
        # disagreements are periodic outside [lo, hi); include 0 so the nearest one is seen
        lo = min(self.offset, other.offset, 0) - math.lcm(len(self.left), len(other.left))
        hi = max(self.end, other.end, 0) + math.lcm(len(self.right), len(other.right))
        for m in range(0, max(-lo, hi) + 1):
            if lo <= m < hi and self[m] != other[m]:
                return m
            if lo <= -m < hi and self[-m] != other[-m]:
                return m
        return None

    # -- identity -------------------------------------------------------
    def _key(self):
        return (self.left, self.core, self.right, self.offset)

    def __eq__(self, other):
        return isinstance(other, SymSeq) and self._key() == other._key()

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key() < other._key()

    def encode(self) -> str:
        s = lambda w: "".join(str(c) for c in w)
        return f"({s(self.left)}){s(self.core)}({s(self.right)})@{self.offset}"

    _PAT = re.compile(r"^\((\d+)\)(\d*)\((\d+)\)@(-?\d+)$")

    @classmethod
    def decode(cls, text: str) -> "SymSeq":
        m = cls._PAT.match(text.strip())
        if not m:
            raise ValueError(f"not a symbol sequence: {text!r}")
        w = lambda g: tuple(int(c) for c in g)
        return cls(w(m.group(1)), w(m.group(2)), w(m.group(3)), int(m.group(4)))

    def __repr__(self):
        return f"SymSeq({self.encode()})"


class OneSidedSeq:
    """Eventually periodic one-sided sequence ``core . tail^inf``."""

    __slots__ = ("core", "tail", "_hash")

    def __init__(self, core, tail):
        core, tail = tuple(core), _primitive(tuple(tail))
        if not tail:
            raise PreconditionError("tail period must be non-empty")
        while core and core[-1] == tail[-1]:
            core = core[:-1]
            tail = _rot_right(tail)
        self.core, self.tail = core, tail
        self._hash = hash((core, tail))

    @classmethod
    def periodic(cls, word) -> "OneSidedSeq":
        return cls((), tuple(word))

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("one-sided sequences start at 0")
        if n < len(self.core):
            return self.core[n]
        return self.tail[(n - len(self.core)) % len(self.tail)]

    def window(self, lo: int, hi: int) -> tuple:
        return tuple(self[n] for n in range(lo, hi + 1))

    def shift(self, k: int = 1) -> "OneSidedSeq":
        if k < 0:
            raise PreconditionError("one-sided shift has no inverse")
        core, tail = self.core, self.tail
        drop = min(k, len(core))
        core, k = core[drop:], k - drop
        k %= len(tail)
        return OneSidedSeq(core, tail[k:] + tail[:k])

    def first_disagreement(self, other: "OneSidedSeq") -> int | None:
        hi = max(len(self.core), len(other.core)) + math.lcm(len(self.tail), len(other.tail))
        for n in range(hi):
            if self[n] != other[n]:
                return n
        return None

    def is_periodic(self) -> bool:
        return not self.core

    def __eq__(self, other):
        return isinstance(other, OneSidedSeq) and (self.core, self.tail) == (other.core, other.tail)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.core, self.tail) < (other.core, other.tail)

    def encode(self) -> str:
        s = lambda w: "".join(str(c) for c in w)
        return f"{s(self.core)}({s(self.tail)})"

    _PAT = re.compile(r"^(\d*)\((\d+)\)$")

    @classmethod
    def decode(cls, text: str) -> "OneSidedSeq":
        m = cls._PAT.match(text.strip())
        if not m:
            raise ValueError(f"not a one-sided sequence: {text!r}")
        return cls(tuple(int(c) for c in m.group(1)), tuple(int(c) for c in m.group(2)))

    def __repr__(self):
        return f"OneSidedSeq({self.encode()})"


# -- agreement radii ----------------------------------------------------

def closed_agreement_radius(delta) -> int:
    """r with: d(x, y) <= delta  iff  x_m = y_m for all |m| <= r (r = -1: no constraint)."""
    delta = as_fraction(delta)
    if delta <= 0:
        raise PreconditionError("radius must be positive")
    if delta >= 1:
        return -1
    v = 1 / delta
    j = log2_floor(v)
    if Fraction(2) ** j != v:
        j += 1
    return j - 1


def open_agreement_radius(eps) -> int:
    """r with: d(x, y) < eps  iff  x_m = y_m for all |m| <= r."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("radius must be positive")
    if eps > 1:
        return -1
    return log2_floor(1 / eps)


# -- cylinders ------------------------------------------------------------

class Cylinder:
    """Finite set of coordinate constraints {position: symbol}."""

    __slots__ = ("constraints", "_hash")

    def __init__(self, constraints=()):
        if isinstance(constraints, dict):
            constraints = constraints.items()
        self.constraints = tuple(sorted((int(p), int(s)) for p, s in constraints))
        positions = [p for p, _ in self.constraints]
        if len(set(positions)) != len(positions):
            raise PreconditionError("conflicting constraints at one position")
        self._hash = hash(self.constraints)

    @classmethod
    def around(cls, seq, lo: int, hi: int) -> "Cylinder":
        return cls({n: seq[n] for n in range(lo, hi + 1)})

    @classmethod
    def word(cls, lo: int, word) -> "Cylinder":
        return cls({lo + i: s for i, s in enumerate(word)})

    @property
    def positions(self) -> list:
        return [p for p, _ in self.constraints]

    def as_dict(self) -> dict:
        return dict(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def contains(self, seq) -> bool:
        return all(seq[p] == s for p, s in self.constraints)

    def intersect(self, other: "Cylinder") -> "Cylinder | None":
        merged = self.as_dict()
        for p, s in other.constraints:
            if merged.get(p, s) != s:
                return None
            merged[p] = s
        return Cylinder(merged)

    def issubset(self, other: "Cylinder") -> bool:
        # valid on a full shift with at least two symbols
        return set(other.constraints) <= set(self.constraints)

    def preimage(self, n: int) -> "Cylinder":
        """sigma^{-n}(C)"""
        return Cylinder({p + n: s for p, s in self.constraints})

    def image(self, n: int) -> "Cylinder":
        """sigma^{n}(C) (two-sided)"""
        return Cylinder({p - n: s for p, s in self.constraints})

    def representative(self, fill: int = 0) -> SymSeq:
        if not self.constraints:
            return SymSeq.constant(fill)
        return SymSeq.constant(fill).with_coords(self.as_dict())

    def __eq__(self, other):
        return isinstance(other, Cylinder) and self.constraints == other.constraints

    def __hash__(self):
        return self._hash

    def encode(self) -> str:
        return "cyl(" + ",".join(f"{p}={s}" for p, s in self.constraints) + ")"

    @classmethod
    def decode(cls, text: str) -> "Cylinder":
        body = text.strip()[4:-1]
        if not body:
            return cls()
        return cls({int(p): int(s) for p, s in (item.split("=") for item in body.split(","))})

    def __repr__(self):
        return self.encode()


def ball_cylinder(center, radius, open_: bool = True, one_sided: bool = False) -> Cylinder:
    r = open_agreement_radius(radius) if open_ else closed_agreement_radius(radius)
    lo = 0 if one_sided else -r
    return Cylinder.around(center, lo, r) if r >= 0 else Cylinder()


# -- systems --------------------------------------------------------------

class _ShiftBase(System):
    one_sided = False

    def __init__(self, k: int = 2):
        if not 2 <= k <= 10:
            raise PreconditionError("alphabet size must be in 2..10")
        self.k = k

    def descriptor(self):
        return {"id": self.id, "alphabet_size": self.k}

    @property
    def diameter(self):
        return Fraction(1)

    def map(self, p):
        return p.shift(1)

    def distance(self, p, q):
        m = p.first_disagreement(q)
        return Fraction(0) if m is None else Fraction(1, 1 << m)

    def to_cylinder(self, region) -> Cylinder:
        if isinstance(region, Cylinder):
            return region
        if isinstance(region, Ball):
            return ball_cylinder(region.center, region.radius, region.open, self.one_sided)
        if region is None:
            return Cylinder()
        raise PreconditionError(f"{type(region).__name__} is not a shift region")

    def region_contains(self, region, p) -> bool:
        return self.to_cylinder(region).contains(p)

    def _random_word(self, rng, n):
        return tuple(int(s) for s in rng.integers(0, self.k, size=n))


class FullShift(_ShiftBase):
    """Two-sided full shift on k symbols."""

    id = "full_shift"
    caps = Capabilities(invertible=True, exact_symbolic=True, enumerates_periodic=True, compact=True)
    point_types = (SymSeq,)

    def check_point(self, p):
        if not isinstance(p, SymSeq):
            raise MixedSystemPoints(f"{type(p).__name__} is not a point of {self.id}")
        if max(p.symbols()) >= self.k:
            raise MixedSystemPoints(f"symbols outside alphabet of size {self.k}")

    def inverse(self, p):
        return p.shift(-1)

    def iterate(self, p, n):
        self.check_point(p)
        return p.shift(n)

    def decode_point(self, data):
        return SymSeq.decode(data)

    def periodic_points(self, period):
        return [SymSeq.periodic(w) for w in product(range(self.k), repeat=period)]

    def periodic_points_complete(self):
        return True

    def sample(self, region, count, seed):
        cyl = self.to_cylinder(region)
        rng = rng_for(seed)
        pos = cyl.positions
        lo, hi = (min(pos), max(pos)) if pos else (0, 0)
        out = []
        for _ in range(count):
            a, b = lo - int(rng.integers(0, 4)), hi + int(rng.integers(0, 4))
            core = self._random_word(rng, b - a + 1)
            left = self._random_word(rng, int(rng.integers(1, 4)))
            right = self._random_word(rng, int(rng.integers(1, 4)))
            out.append(SymSeq(left, core, right, a).with_coords(cyl.as_dict()))
        return out

    def neighbors(self, x, radius, budget, seed):
        r = closed_agreement_radius(radius)
        rng = rng_for(seed)
        out, seen = [], {x}
        flip = lambda s: (s + 1) % self.k
        m = r + 1
        while len(out) < budget // 2 and m <= r + 1 + budget:
            for pos in (m, -m):
                y = x.with_coords({pos: flip(x[pos])})
                if y not in seen:
                    seen.add(y)
                    out.append(y)
            m += 1
        tries = 0
        while len(out) < budget and tries < 4 * budget:
            tries += 1
            band = range(r + 1, r + 7)
            coords = {}
            for pos in band:
                if rng.random() < 0.5:
                    coords[pos] = int(rng.integers(0, self.k))
                if rng.random() < 0.5:
                    coords[-pos] = int(rng.integers(0, self.k))
            y = x.with_coords(coords)
            if y not in seen:
                seen.add(y)
                out.append(y)
        return out


class OneSidedShift(_ShiftBase):
    """One-sided full shift on k symbols (not invertible)."""

    id = "one_sided_shift"
    one_sided = True
    caps = Capabilities(invertible=False, exact_symbolic=True, enumerates_periodic=True, compact=True)
    point_types = (OneSidedSeq,)

    def check_point(self, p):
        if not isinstance(p, OneSidedSeq):
            raise MixedSystemPoints(f"{type(p).__name__} is not a point of {self.id}")
        if max(set(p.core) | set(p.tail)) >= self.k:
            raise MixedSystemPoints(f"symbols outside alphabet of size {self.k}")

    def decode_point(self, data):
        return OneSidedSeq.decode(data)

    def periodic_points(self, period):
        return [OneSidedSeq.periodic(w) for w in product(range(self.k), repeat=period)]

    def periodic_points_complete(self):
        return True

    def sample(self, region, count, seed):
        cyl = self.to_cylinder(region)
        if any(p < 0 for p in cyl.positions):
            raise EmptyRegion("one-sided cylinder with negative coordinate")
        rng = rng_for(seed)
        hi = max(cyl.positions, default=0)
        out = []
        for _ in range(count):
            core = list(self._random_word(rng, hi + 1 + int(rng.integers(0, 4))))
            for p, s in cyl.constraints:
                core[p] = s
            tail = self._random_word(rng, int(rng.integers(1, 4)))
            out.append(OneSidedSeq(core, tail))
        return out

    def neighbors(self, x, radius, budget, seed):
        r = closed_agreement_radius(radius)
        out = []
        for m in range(r + 1, r + 1 + budget):
            n = max(m + 1, len(x.core)) + len(x.tail)
            word = list(x.window(0, n - 1))
            word[m] = (word[m] + 1) % self.k
            out.append(OneSidedSeq(word, x.window(n, n + len(x.tail) - 1)))
        return out
