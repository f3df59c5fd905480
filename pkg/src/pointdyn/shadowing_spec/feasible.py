"""Constraint propagation for scalar maps.

A tracing problem is a set of targets {i: enclosure of the point to follow at
time i} and a radius eps. Pulling inner balls back through exact (or inward
rounded) preimages gives a set of valid tracers; pushing outer balls forward
through outward rounded images proves that no tracer exists when the set
becomes empty.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..exact import as_fraction, simplest_dyadic_between
from ..intervals import Interval, merge
from ..systems.scalar import DoublingCircle, ScalarSystem

INNER_SHRINK = Fraction(1, 1 << 16)
DEFAULT_BITS = 96


def _exact_ok(system: ScalarSystem) -> bool:
    # these maps keep dyadic denominators bounded, so exact orbits stay small
    return not system.monotone_increasing or system.id in ("doubling_ray", "identity_interval")


def orbit_enclosures(system: ScalarSystem, x, times, bits: int = DEFAULT_BITS) -> dict:
    """{i: Interval containing f^i(x)} for the requested times (exact points when cheap)."""
    times = sorted(set(times))
    out = {}
    if not times:
        return out
    x = as_fraction(x)
    if _exact_ok(system):
        z = x
        for i in range(times[-1] + 1):
            if i in times:
                out[i] = Interval.point(z)
            z = system.map(z)
        return out
    iv = Interval.point(x)
    for i in range(times[-1] + 1):
        if i in times:
            out[i] = iv
        (iv,) = system.image_bounds([iv], bits)
    return out


def _circle_gap(system, a, b):
    return system.distance(a % 1, b % 1)


def enclosure_distance_bound(system: ScalarSystem, a: Interval, b: Interval):
    """Upper bound on d(p, q) for p in a, q in b."""
    if isinstance(system, DoublingCircle):
        cands = [_circle_gap(system, u, v) for u in (a.lo, a.hi) for v in (b.lo, b.hi)]
        # both enclosures are tiny or points here, so endpoint pairs suffice
        return max(cands)
    return max(abs(a.hi - b.lo), abs(b.hi - a.lo))


def inner_ball(system: ScalarSystem, enc: Interval, eps) -> list:
    """Closed pieces of points within distance < eps of every point of enc."""
    r = eps * (1 - INNER_SHRINK)
    lo, hi = enc.hi - r, enc.lo + r
    if lo > hi:
        return []
    if isinstance(system, DoublingCircle):
        return system.arcs(Interval(lo, hi))
    iv = Interval(lo, hi).intersect(system.domain.closure())
    return [] if iv.is_empty() else [iv]


def outer_ball(system: ScalarSystem, enc: Interval, eps) -> list:
    """Closed pieces containing every point within eps of some point of enc."""
    iv = Interval(enc.lo - eps, enc.hi + eps)
    if isinstance(system, DoublingCircle):
        return system.arcs(iv)
    iv = iv.intersect(system.domain.closure())
    return [] if iv.is_empty() else [iv]


def intersect_pieces(a: list, b: list) -> list:
    return merge(p.intersect(q) for p in a for q in b)


def _pick(pieces: list):
    best = max(pieces, key=lambda p: p.hi - p.lo)
    if best.lo == best.hi:
        return best.lo
    return simplest_dyadic_between(best.lo, best.hi) if best.hi - best.lo > 0 else best.lo


def backward_tracers(system: ScalarSystem, targets: dict, eps, bits: int = 64) -> list:
    """Pieces of time-0 points whose orbits stay within eps of every target."""
    H = max(targets)
    S = inner_ball(system, targets[H], eps)
    for i in range(H - 1, -1, -1):
        if not S:
            return []
        S = merge(q for p in S for q in system.preimage_pieces(p, bits))
        if i in targets:
            S = intersect_pieces(S, inner_ball(system, targets[i], eps))
    return S


def forward_infeasibility(system: ScalarSystem, targets: dict, eps, bits: int = DEFAULT_BITS):
    """Certificate that no point eps-traces the targets, or None.

    The certificate lists the over-approximated feasible sets F_0..F_t with F_t
    empty: F_i = closure(f(F_{i-1})) (outward rounded) intersected with the
    closed eps-neighbourhood of target i.
    """
    H = max(targets)
    dom = system.sampling_window() if math.isinf(system.domain.hi) else system.domain
    F = [Interval(dom.lo, system.domain.hi).closure()] if math.isinf(system.domain.hi) else [dom.closure()]
    trail = []
    for i in range(H + 1):
        if i > 0:
            F = system.image_bounds(F, bits)
        if i in targets:
            F = intersect_pieces(F, outer_ball(system, targets[i], eps))
        trail.append([p.encode() for p in F])
        if not F:
            return {"kind": "empty_feasible_set", "empty_at": i, "eps": eps, "bits": bits, "trail": trail}
    return None


def check_infeasibility(system: ScalarSystem, targets: dict, eps, certificate: dict) -> bool:
    """Re-derive each feasible set from the previous one and confirm the final emptiness."""
    bits = certificate["bits"]
    trail = [[Interval.decode(t) for t in step] for step in certificate["trail"]]
    for i, step in enumerate(trail):
        prev = system.image_bounds(trail[i - 1], bits) if i else [system.domain.closure()]
        if i in targets:
            prev = intersect_pieces(prev, outer_ball(system, targets[i], eps))
        if not all(any(p.issubset(q) for q in step) for p in prev):
            return False
    return not trail[-1] and certificate["empty_at"] == len(trail) - 1


def trace_targets(system: ScalarSystem, targets: dict, eps, bits: int = 64):
    """(tracer, None) on success, (None, certificate) when provably impossible, else (None, None)."""
    eps = as_fraction(eps)
    S = backward_tracers(system, targets, eps, bits)
    if S:
        y = _pick(S)
        if isinstance(system, DoublingCircle):
            y = y % 1
        return y, None
    return None, forward_infeasibility(system, targets, eps)


def tracing_errors(system: ScalarSystem, y, targets: dict, bits: int = DEFAULT_BITS) -> dict:
    """{i: upper bound on d(f^i y, target_i)}."""
    enc = orbit_enclosures(system, y, targets.keys(), bits)
    return {i: enclosure_distance_bound(system, enc[i], targets[i]) for i in targets}
