"""Intervals with exact rational endpoints.

``hi`` may be ``math.inf`` for rays. Open/closed flags are kept so that open
balls and closed images can be mixed; images of maps follow the closure
convention (computed on the closure, returned closed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import as_fraction, round_down, round_up


def _coerce(x):
    if isinstance(x, float) and math.isinf(x):
        return x
    return as_fraction(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _coerce(self.lo))
        object.__setattr__(self, "hi", _coerce(self.hi))
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, True, True)

    @classmethod
    def point(cls, x):
        return cls(x, x)

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    @property
    def length(self):
        return self.hi - self.lo

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, True, not math.isinf(self.hi))

    def contains(self, x) -> bool:
        x = _coerce(x)
        above = self.lo < x or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def meets(self, other: "Interval") -> bool:
        return not self.intersect(other).is_empty()

    def issubset(self, other: "Interval") -> bool:
        if self.is_empty():
            return True
        lo_ok = other.lo < self.lo or (self.lo == other.lo and (other.lo_closed or not self.lo_closed))
        hi_ok = self.hi < other.hi or (self.hi == other.hi and (other.hi_closed or not self.hi_closed))
        return lo_ok and hi_ok

    def hull(self, other: "Interval") -> "Interval":
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        lc = (self.lo_closed and self.lo == lo) or (other.lo_closed and other.lo == lo)
        hc = (self.hi_closed and self.hi == hi) or (other.hi_closed and other.hi == hi)
        return Interval(lo, hi, lc, hc)

    def round_outward(self, bits: int) -> "Interval":
        hi = self.hi if math.isinf(self.hi) else round_up(self.hi, bits)
        return Interval(round_down(self.lo, bits), hi, True, not math.isinf(hi))

    def round_inward(self, bits: int) -> "Interval":
        lo = round_up(self.lo, bits)
        hi = self.hi if math.isinf(self.hi) else round_down(self.hi, bits)
        lc = self.lo_closed if lo == self.lo else True
        hc = self.hi_closed if hi == self.hi else True
        return Interval(lo, hi, lc, hc)

    def midpoint(self) -> Fraction:
        if math.isinf(self.hi):
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def max_bits(self) -> int:
        bits = self.lo.denominator.bit_length()
        if not math.isinf(self.hi):
            bits = max(bits, self.hi.denominator.bit_length())
        return bits

    def encode(self) -> str:
        def enc(v):
            if isinstance(v, float):
                return "inf"
            return f"{v.numerator}/{v.denominator}"

        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{enc(self.lo)},{enc(self.hi)}{right}"

    @classmethod
    def decode(cls, text: str) -> "Interval":
        text = text.strip()
        lc, rc = text[0] == "[", text[-1] == "]"
        a, b = text[1:-1].split(",")
        hi = math.inf if b.strip() == "inf" else Fraction(b)
        return cls(Fraction(a), hi, lc, rc)

    def __repr__(self):
        return f"Interval{self.encode()}"


def union_meets(pieces, other: Interval) -> bool:
    return any(p.meets(other) for p in pieces)


def merge(pieces) -> list[Interval]:
    """Merge overlapping closed pieces into a sorted disjoint list."""
    pieces = sorted((p for p in pieces if not p.is_empty()), key=lambda p: (p.lo, p.hi))
    out: list[Interval] = []
    for p in pieces:
        if out and (p.lo < out[-1].hi or (p.lo == out[-1].hi and (p.lo_closed or out[-1].hi_closed))):
            out[-1] = out[-1].hull(p)
        else:
            out.append(p)
    return out
