"""Transition times f^n(U) n V != {} with exact cylinder or interval images.

A failure certificate is a closed forward-invariant interval J with
f^{n0}(closure U) inside J and J disjoint from V: then f^n(U) misses V for
every n >= n0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import EmptyRegion
from ..exact import round_down, round_up
from ..intervals import Interval, merge
from ..systems.base import Ball, System
from ..systems.scalar import DoublingCircle, ScalarSystem
from ..systems.symbolic import Cylinder, OneSidedSeq, _ShiftBase
from ..verdict import Outcome, Verdict, encode

BITS = 96
INNER_FRACTION = Fraction(1, 1 << 20)


@dataclass
class Transition:
    """kind: "time" (N with nonempty meets for N <= n <= checked_to),
    "certificate" (escape proof), or "inconclusive"."""

    kind: str
    N: int | None = None
    checked_to: int | None = None
    all_n: bool = False
    certificate: dict | None = None
    witness: Any = None
    details: dict = field(default_factory=dict)

    def encode(self):
        out = {"kind": self.kind, "N": self.N, "checked_to": self.checked_to, "all_n": self.all_n}
        if self.certificate is not None:
            out["certificate"] = encode(self.certificate)
        if self.witness is not None:
            out["witness"] = encode(self.witness)
        return out


# -- shifts -----------------------------------------------------------------

def _shift_meet(system: _ShiftBase, U: Cylinder, V: Cylinder, n: int) -> Cylinder | None:
    """U n f^{-n}(V): points of U whose n-th image lies in V."""
    return U.intersect(V.preimage(n))


def shift_transition(system: _ShiftBase, U: Cylinder, V: Cylinder) -> Transition:
    """Least N with f^n(U) n V != {} for every n >= N (exact, all n).

    Beyond n = max(pos U) - min(pos V) the constrained windows are disjoint,
    so only finitely many n need checking.
    """
    if not U.positions or not V.positions:
        return Transition("time", 0, all_n=True)
    top = max(U.positions) - min(V.positions)
    last_empty = -1
    for n in range(0, max(top, 0) + 1):
        if _shift_meet(system, U, V, n) is None:
            last_empty = n
    N = last_empty + 1
    meet = _shift_meet(system, U, V, N)
    return Transition("time", N, all_n=True, witness=cylinder_point(system, meet),
                      details={"disjoint_windows_from": max(top, 0) + 1})


def cylinder_point(system: _ShiftBase, cyl: Cylinder, fill: int = 0):
    """A point of the cylinder in the system's own point type."""
    if system.one_sided:
        top = max(cyl.positions, default=-1)
        word = [fill] * (top + 1)
        for p, s in cyl.constraints:
            word[p] = s
        return OneSidedSeq(word, (fill,))
    return cyl.representative(fill)


def shift_connector(system: _ShiftBase, U: Cylinder, V: Cylinder, n: int, fill_from=None):
    """A point of U whose n-th image is in V, or None."""
    meet = _shift_meet(system, U, V, n)
    if meet is None:
        return None
    if fill_from is not None and not system.one_sided:
        return fill_from.with_coords(meet.as_dict())
    return cylinder_point(system, meet)


# -- scalar maps -------------------------------------------------------------

def _inner(iv: Interval) -> Interval:
    """A closed subinterval of iv (shaved at open ends)."""
    if math.isinf(iv.hi):
        hi = iv.lo + 1
        w = hi - iv.lo
        return Interval(iv.lo + (0 if iv.lo_closed else w * INNER_FRACTION), hi)
    w = (iv.hi - iv.lo) * INNER_FRACTION
    lo = iv.lo if iv.lo_closed else iv.lo + w
    hi = iv.hi if iv.hi_closed else iv.hi - w
    return Interval(lo, hi)


def _pieces_meet(pieces, V: Interval) -> bool:
    return any(p.meets(V) for p in pieces)


def _invariant_candidates(system: ScalarSystem, image: list) -> list:
    lo = min(p.lo for p in image)
    hi = max(p.hi for p in image)
    dom = system.domain.closure()
    cands = [Interval(lo, hi), Interval(lo, dom.hi), Interval(dom.lo, hi)]
    return [J for J in cands if not J.is_empty()]


def escape_certificate(system: ScalarSystem, U: Interval, V: Interval, n_max: int):
    """Search n0 <= n_max and an invariant J with f^{n0}(cl U) in J, J n V = {}."""
    if isinstance(system, DoublingCircle) or not system.monotone_increasing:
        return None
    image = [U.closure()]
    for n0 in range(n_max + 1):
        if n0 > 0:
            image = system.image_bounds(image, BITS)
        for J in _invariant_candidates(system, image):
            if not J.meets(V) and all(p.issubset(J) for p in image) and system.is_forward_invariant(J):
                return {"kind": "escape", "n0": n0, "J": J.encode(), "image": [p.encode() for p in image],
                        "bits": BITS}
    return None


def check_escape_certificate(system: ScalarSystem, U: Interval, V: Interval, cert: dict) -> bool:
    """Independent re-check: image of cl U after n0 steps lies in J, J invariant and disjoint from V."""
    J = Interval.decode(cert["J"])
    image = [U.closure()]
    for _ in range(cert["n0"]):
        image = system.image_bounds(image, cert["bits"])
    return (all(p.issubset(J) for p in image) and system.is_forward_invariant(J) and not J.meets(V))


def scalar_transition(system: ScalarSystem, U: Interval, V: Interval, n_max: int) -> Transition:
    cert = escape_certificate(system, U, V, n_max)
    if cert is not None:
        return Transition("certificate", certificate=cert)
    meets = []
    if system.monotone_increasing:
        # f strictly increasing and continuous: f^n(U) contains the open interval
        # between its endpoint images; track an upper bound of the left end and
        # a lower bound of the right end
        lo, hi = U.lo, (U.hi if not math.isinf(U.hi) else U.lo + 1)
        for n in range(n_max + 1):
            if n > 0:
                lo = round_up(system.map(lo), BITS)
                hi = round_down(system.map(hi), BITS)
            core = Interval(lo, hi, False, False) if lo < hi else Interval(lo, lo, False, False)
            meets.append(core.meets(V))
    else:
        inner = [_inner(U)]
        for n in range(n_max + 1):
            if n > 0:
                inner = system.image_bounds(inner, BITS, inward=True)
            meets.append(_pieces_meet(inner, V))
    if not meets[-1]:
        return Transition("inconclusive", checked_to=n_max, details={"meets": meets})
    N = n_max
    while N > 0 and meets[N - 1]:
        N -= 1
    return Transition("time", N, checked_to=n_max)


def scalar_connector(system: ScalarSystem, U: Interval, V: Interval, n: int):
    """A point y in U with f^n(y) in V, by pulling V back through inner preimages."""
    S = [_inner(V.intersect(system.domain))]
    for _ in range(n):
        S = merge(q for p in S for q in system.preimage_pieces(p))
        if not S:
            return None
    S = merge(p.intersect(_inner(U)) for p in S)
    if not S:
        return None
    best = max(S, key=lambda p: p.hi - p.lo)
    return best.midpoint() if best.lo < best.hi else best.lo


# -- dispatch ---------------------------------------------------------------

def _as_region(system: System, R):
    if isinstance(system, _ShiftBase):
        return system.to_cylinder(R)
    if isinstance(system, ScalarSystem):
        if isinstance(system, DoublingCircle) and isinstance(R, Ball):
            return Interval(R.center - R.radius, R.center + R.radius, not R.open, not R.open)
        return system.to_interval(R)
    return R


def mixing_transition_time(system: System, U, V, n_max: int = 32) -> Transition:
    """Least N with f^n(U) n V nonempty for N <= n (<= n_max unless all_n), or a certificate."""
    U_, V_ = _as_region(system, U), _as_region(system, V)
    if isinstance(system, _ShiftBase):
        return shift_transition(system, U_, V_)
    if isinstance(system, ScalarSystem) and system.caps.exact_interval_image:
        if U_.is_empty() or V_.is_empty():
            raise EmptyRegion("transition regions must be nonempty")
        if isinstance(system, DoublingCircle):
            return _circle_transition(system, U_, V_, n_max)
        return scalar_transition(system, U_, V_, n_max)
    return Transition("inconclusive", details={"reason": f"{system.id} has no exact images"})


def _circle_transition(system: DoublingCircle, U: Interval, V: Interval, n_max: int) -> Transition:
    # an arc of length L covers the circle after ceil(log2(1/L)) doublings
    inner = _inner(U)
    pieces = system.arcs(inner)
    Vs = system.arcs(V)
    meets = []
    covered_at = None
    for n in range(n_max + 1):
        if n > 0:
            pieces = merge(q for p in pieces for q in system.map_interval(p))
        if covered_at is None and pieces == [Interval(0, 1)]:
            covered_at = n
        meets.append(any(_pieces_meet(pieces, v) for v in Vs))
    N = n_max if meets[-1] else None
    if N is None:
        return Transition("inconclusive", checked_to=n_max)
    while N > 0 and meets[N - 1]:
        N -= 1
    # once an image is the whole circle every later image is too
    return Transition("time", N, checked_to=n_max, all_n=covered_at is not None)


def _probe_result(system, U, V, n_max, require_all: bool):
    tr = mixing_transition_time(system, U, V, n_max)
    if tr.kind == "certificate":
        return "fails", tr
    if tr.kind == "time" and (not require_all or tr.N <= n_max):
        return "holds", tr
    return "inconclusive", tr


def _point_verdict(name, system, x, radii, probe_regions, n_max, require_all):
    if not probe_regions:
        raise ValueError("probe regions must be nonempty")
    params = {"x": system.encode_point(x), "radii": list(radii), "probes": len(probe_regions), "n_max": n_max}
    inconclusive = None
    times = []
    for r in radii:
        U = Ball(x, r)
        for k, V in enumerate(probe_regions):
            status, tr = _probe_result(system, U, V, n_max, require_all)
            if status == "fails":
                witness = {"radius": r, "probe": k, "certificate": tr.certificate}
                return Verdict(name, Outcome.FAILS, params, witness=witness, horizon=n_max)
            if status == "inconclusive" and inconclusive is None:
                inconclusive = {"radius": r, "probe": k}
            times.append(tr.N)
    if inconclusive:
        return Verdict(name, Outcome.INCONCLUSIVE, params, horizon=n_max, details=inconclusive)
    return Verdict(name, Outcome.HOLDS, params, horizon=n_max, details={"max_transition": max(times)})


def mixing_point_verdict(system: System, x, radii, probe_regions, n_max: int = 32) -> Verdict:
    """For each U = B(x, r) and probe V: f^n(U) meets V for all n >= N (checked up to n_max,
    or for all n on shifts); fails only with an escape certificate."""
    return _point_verdict("mixing_point", system, x, radii, probe_regions, n_max, True)


def transitive_point_verdict(system: System, x, radii, probe_regions, n_max: int = 32) -> Verdict:
    """As mixing_point_verdict but one n >= 1 with f^n(U) n V != {} suffices.

    A failure needs f^n(U) to miss V for every n >= 1: the escape certificate
    covers n >= n0 and exact outer images cover 1 <= n < n0.
    """
    if not probe_regions:
        raise ValueError("probe regions must be nonempty")
    params = {"x": system.encode_point(x), "radii": list(radii), "probes": len(probe_regions), "n_max": n_max}
    for r in radii:
        U = Ball(x, r)
        for k, V in enumerate(probe_regions):
            tr = mixing_transition_time(system, U, V, n_max)
            if tr.kind == "time":
                continue
            if tr.kind == "certificate":
                U_, V_ = _as_region(system, U), _as_region(system, V)
                outer, inner = [U_.closure()], [_inner(U_)]
                early_hit = certified_hit = False
                for _ in range(1, tr.certificate["n0"]):
                    outer = system.image_bounds(outer, BITS)
                    inner = system.image_bounds(inner, BITS, inward=True)
                    early_hit = early_hit or _pieces_meet(outer, V_)
                    certified_hit = certified_hit or _pieces_meet(inner, V_)
                if certified_hit:
                    continue
                if not early_hit:
                    return Verdict("transitive_point", Outcome.FAILS, params, horizon=n_max,
                                   witness={"radius": r, "probe": k, "certificate": tr.certificate})
            return Verdict("transitive_point", Outcome.INCONCLUSIVE, params, horizon=n_max,
                           details={"radius": r, "probe": k})
    return Verdict("transitive_point", Outcome.HOLDS, params, horizon=n_max)
