"""Small exact-arithmetic helpers: rational coercion, dyadic rounding, logs."""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

FLOAT_TOL = 1e-12


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and floats to a Fraction.

    Floats go through their shortest decimal repr, so ``0.3`` becomes 3/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


def sqrt_down(x: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits whose square is <= x (x >= 0)."""
    scale = 1 << bits
    # floor(sqrt(x) * scale) = isqrt(floor(x * scale**2)) is exact for x >= 0
    return Fraction(math.isqrt(math.floor(x * scale * scale)), scale)


def sqrt_up(x: Fraction, bits: int) -> Fraction:
    lo = sqrt_down(x, bits)
    if lo * lo == x:
        return lo
    return lo + Fraction(1, 1 << bits)


def log2_floor(x: Fraction) -> int:
    """floor(log2(x)) for x > 0, exact."""
    if x <= 0:
        raise ValueError("log2 of non-positive value")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    # 2**k <= x < 2**(k+1) after at most one correction
    if Fraction(2) ** k > x:
        k -= 1
    elif Fraction(2) ** (k + 1) <= x:
        k += 1
    return k


def simplest_dyadic_between(lo: Fraction, hi: Fraction) -> Fraction:
    """A dyadic rational strictly inside (lo, hi) with few bits."""
    if not lo < hi:
        raise ValueError("empty interval")
    bits = 0
    while True:
        scale = 1 << bits
        cand = Fraction(math.floor(lo * scale) + 1, scale)
        if lo < cand < hi:
            return cand
        bits += 1
