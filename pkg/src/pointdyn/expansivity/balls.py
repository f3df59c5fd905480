"""Finite-horizon dynamical balls and the expansivity verdicts built on them.

On shifts the ball is an exact cylinder; on everything else it is the list of
candidate points that pass the horizon test, optionally with an interval that
is certified to lie inside the ball.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import NonInvertibleTwoSided, PreconditionError
from ..exact import as_fraction
from ..intervals import Interval
from ..systems.base import System
from ..systems.fixtures import AccumulatingSequenceSpace, CloudPoint, OrbitCloudSystem
from ..systems.scalar import ScalarSystem
from ..systems.symbolic import Cylinder, _ShiftBase, closed_agreement_radius
from ..verdict import Outcome, Verdict, encode

DEFAULT_DELTA_GRID = tuple(Fraction(1, 1 << k) for k in range(17))


@dataclass(frozen=True)
class Window:
    """Time indices of a horizon: two-sided -T..T, one-sided 0..T, or {m n : |n| <= T}."""

    kind: str
    T: int
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("two_sided", "one_sided", "subgroup"):
            raise PreconditionError(f"unknown window kind {self.kind!r}")
        if self.T < 0:
            raise PreconditionError("horizon must be non-negative")
        if self.kind == "subgroup" and self.m == 0:
            raise PreconditionError("subgroup generator must be non-zero")

    @classmethod
    def two_sided(cls, T):
        return cls("two_sided", T)

    @classmethod
    def one_sided(cls, T):
        return cls("one_sided", T)

    @classmethod
    def subgroup(cls, m, T):
        return cls("subgroup", T, m)

    @property
    def needs_inverse(self) -> bool:
        return self.kind != "one_sided"

    def indices(self) -> list:
        if self.kind == "two_sided":
            return list(range(-self.T, self.T + 1))
        if self.kind == "one_sided":
            return list(range(self.T + 1))
        step = abs(self.m)
        return [step * n for n in range(-self.T, self.T + 1)]

    def span(self) -> tuple:
        idx = self.indices()
        return min(idx), max(idx)

    def encode(self):
        out = {"kind": self.kind, "T": self.T}
        if self.kind == "subgroup":
            out["m"] = self.m
        return out


def _as_window(window, system: System) -> Window:
    if isinstance(window, Window):
        return window
    return Window.two_sided(window) if system.caps.invertible else Window.one_sided(window)


def first_violation(system: System, x, y, delta, indices) -> int | None:
    """First index n (in the given order) with d(f^n x, f^n y) > delta."""
    lo, hi = min(indices), max(indices)
    ox = system.orbit_window(x, min(lo, 0), max(hi, 0))
    oy = system.orbit_window(y, min(lo, 0), max(hi, 0))
    for n in indices:
        if system.distance(ox[n], oy[n]) > delta:
            return n
    return None


def max_deviation(system: System, x, y, indices):
    lo, hi = min(indices), max(indices)
    ox = system.orbit_window(x, min(lo, 0), max(hi, 0))
    oy = system.orbit_window(y, min(lo, 0), max(hi, 0))
    return max(system.distance(ox[n], oy[n]) for n in indices)


@dataclass(frozen=True)
class DynamicalBall:
    center: Any
    radius: Any
    window: Window
    cylinder: Cylinder | None = None
    points: tuple | None = None
    infinite_tails: tuple = ()
    certified_interval: Interval | None = None
    details: dict = field(default_factory=dict)

    @property
    def representation(self) -> str:
        return "cylinder" if self.cylinder is not None else "explicit"

    @property
    def is_infinite(self) -> bool:
        return bool(self.infinite_tails)

    def others(self) -> list:
        return [p for p in (self.points or ()) if p != self.center]

    def contains(self, system: System, y) -> bool:
        if self.cylinder is not None:
            return self.cylinder.contains(y)
        return first_violation(system, self.center, y, self.radius, self.window.indices()) is None

    def issubset(self, other: "DynamicalBall") -> bool:
        if self.cylinder is not None and other.cylinder is not None:
            return self.cylinder.issubset(other.cylinder)
        return set(self.points or ()) <= set(other.points or ())

    def encode(self):
        out = {
            "center": encode(self.center),
            "radius": encode(self.radius),
            "window": self.window.encode(),
            "representation": self.representation,
        }
        if self.cylinder is not None:
            out["cylinder"] = self.cylinder.encode()
        else:
            out["points"] = [encode(p) for p in self.points]
        if self.infinite_tails:
            out["infinite_tails"] = list(self.infinite_tails)
        if self.certified_interval is not None:
            out["certified_interval"] = self.certified_interval.encode()
        return out


def shift_ball_cylinder(system: _ShiftBase, x, delta, window: Window) -> Cylinder:
    """y is in the ball iff it agrees with x on every position n + m, n in window, |m| <= r.

    One-sided shifts use 0 <= m <= r instead.
    """
    r = closed_agreement_radius(delta)
    positions = set()
    if r >= 0:
        offsets = range(0, r + 1) if system.one_sided else range(-r, r + 1)
        for n in window.indices():
            positions.update(n + m for m in offsets)
    return Cylinder({p: x[p] for p in positions})


def _certify_interval(system: ScalarSystem, x, delta, window: Window, halvings: int = 48) -> Interval | None:
    """A closed interval around x whose exact images stay in the delta-balls of x's orbit."""
    if not (system.caps.exact_interval_image and system.monotone_increasing):
        return None
    if any(n < 0 for n in window.indices()) and not system.caps.invertible:
        return None
    hi_n = max(window.indices())
    orbit = system.orbit_window(x, min(0, min(window.indices())), hi_n)
    r = as_fraction(delta)
    for _ in range(halvings):
        J = Interval(x - r, x + r).intersect(system.domain.closure())
        ok = True
        for n in window.indices():
            target = Interval(orbit[n] - delta, orbit[n] + delta)
            if n >= 0:
                pieces = [J] if n == 0 else system.interval_image(J, n)
            else:
                lo, hi = system.iterate(J.lo, n), system.iterate(J.hi, n)
                pieces = [Interval(lo, hi)]
            if not all(p.issubset(target) for p in pieces):
                ok = False
                break
        if ok:
            return J
        r /= 2
    return None


def _ball(system: System, x, delta, window: Window, candidate_budget: int, seed: int) -> DynamicalBall:
    if delta is None or as_fraction(delta) <= 0:
        raise PreconditionError("ball radius must be positive")
    if window.needs_inverse and not system.caps.invertible:
        raise NonInvertibleTwoSided(f"{system.id} is not invertible; use a one-sided window")
    system.check_point(x)
    if isinstance(system, _ShiftBase):
        return DynamicalBall(x, as_fraction(delta), window, cylinder=shift_ball_cylinder(system, x, delta, window))
    idx = window.indices()
    if isinstance(system, AccumulatingSequenceSpace):
        # identity map: the horizon ball is the metric ball at every horizon
        members, tails = system.ball_members(x, delta)
        return DynamicalBall(x, delta, window, points=tuple(members), infinite_tails=tuple(tails))
    cands = [x] + system.neighbors(x, delta, candidate_budget, seed)
    kept = tuple(y for y in cands if first_violation(system, x, y, delta, idx) is None)
    cert = _certify_interval(system, x, as_fraction(delta), window) if isinstance(system, ScalarSystem) else None
    tails = ()
    if isinstance(system, OrbitCloudSystem) and cloud_tail_in_ball(system, x, delta):
        tails = ("cloud",)
    return DynamicalBall(x, delta, window, points=kept, infinite_tails=tails, certified_interval=cert,
                         details={"candidates": len(cands), "seed": seed})


def cloud_tail_in_ball(system: OrbitCloudSystem, x, delta) -> bool:
    """Whether infinitely many cloud points lie in the full-time ball around x.

    Decided exactly when x is a cloud point or a periodic base point; the
    level-k cloud orbits sit at distance 1/k + d0(g^n x, g^{n+j} p) from x's orbit.
    """
    delta = as_fraction(delta)
    if isinstance(x, CloudPoint):
        return False  # distinct cloud points stay >= 1/k_x apart from x
    period = x.period() if hasattr(x, "period") else None
    if period is None:
        return False
    L = math.lcm(period, system.t)
    for j in range(system.t):
        worst = max(system.base.distance(system.base.iterate(x, n), system.p_orbit[(j + n) % system.t]) for n in range(L))
        if worst < delta:
            return True
    return False


def gamma_ball(system: System, x, delta, window=0, candidate_budget: int = 256, seed: int = 0) -> DynamicalBall:
    """Horizon-T approximation of {y : d(f^n x, f^n y) <= delta for all n in Z}."""
    if not isinstance(window, Window):
        window = Window.two_sided(window)
    return _ball(system, x, delta, window, candidate_budget, seed)


def phi_ball(system: System, x, delta, T: int = 0, candidate_budget: int = 256, seed: int = 0) -> DynamicalBall:
    """Forward-time ball; n = 0 is included."""
    return _ball(system, x, delta, Window.one_sided(T), candidate_budget, seed)


def gamma_subgroup_ball(system: System, x, delta, m: int, T: int = 0, candidate_budget: int = 256, seed: int = 0):
    return _ball(system, x, delta, Window.subgroup(m, T), candidate_budget, seed)


def subgroup_radius(delta, m: int) -> Fraction:
    """Radius eps with d(a, b) <= eps forcing d(f^s a, f^s b) <= delta for 0 <= s < |m|.

    Uses d(f a, f b) <= 2 d(a, b), the Lipschitz bound of the shift metric.
    """
    return as_fraction(delta) / (1 << (abs(m) - 1))


def subgroup_containment(system: _ShiftBase, x, delta, m: int, T: int) -> dict:
    """Exact cylinder containments between subgroup balls and full balls.

    ``subgroup_in_full``: the subgroup ball at eps = subgroup_radius(delta, m)
    lies inside the full ball at delta over -|m|T..|m|T.
    ``full_in_subgroup``: the full ball at delta over the same span lies
    inside the subgroup ball at delta.
    """
    span = abs(m) * T
    eps = subgroup_radius(delta, m)
    sub_small = gamma_subgroup_ball(system, x, eps, m, T)
    sub = gamma_subgroup_ball(system, x, delta, m, T)
    full = gamma_ball(system, x, delta, Window.two_sided(span))
    return {
        "eps": eps,
        "subgroup_in_full": sub_small.issubset(full),
        "full_in_subgroup": full.issubset(sub),
    }


def _limit_singleton(system: _ShiftBase, delta) -> bool:
    # horizon-T shift balls are nested cylinders whose windows grow with T;
    # their intersection is {x} exactly when delta forces agreement at 0
    return closed_agreement_radius(delta) >= 0


def _all_time_witness(system: System, x, y, window: Window) -> bool:
    """Whether checking the window already decides every time index."""
    if isinstance(system, AccumulatingSequenceSpace):
        return True
    if isinstance(system, OrbitCloudSystem):
        px = system.t if isinstance(x, CloudPoint) else (x.period() if hasattr(x, "period") else None)
        py = system.t if isinstance(y, CloudPoint) else (y.period() if hasattr(y, "period") else None)
        if px and py:
            L = math.lcm(px, py)
            lo, hi = window.span()
            return hi - lo + 1 >= L
    return False


def pointwise_expansivity_verdict(system: System, x, delta_grid=DEFAULT_DELTA_GRID, T: int = 8,
                                  budget: int = 256, seed: int = 0):
    """(largest grid delta whose horizon ball is {x}, Verdict).

    The witness on failure is a point y != x found in the ball at the smallest
    grid radius; ``details.witness_all_times`` says whether its membership is
    decided for every n rather than only up to T.
    """
    grid = [as_fraction(d) if not isinstance(d, float) else d for d in delta_grid]
    if not grid:
        raise PreconditionError("delta grid must be non-empty")
    if any(a <= b for a, b in zip(grid, grid[1:])):
        raise PreconditionError("delta grid must be strictly descending")
    window = _as_window(T, system)
    params = {"delta_grid": grid, "T": T, "budget": budget, "x": system.encode_point(x)}
    witness, witness_delta = None, None
    for delta in grid:
        ball = _ball(system, x, delta, window, budget, seed)
        if ball.cylinder is not None:
            if _limit_singleton(system, delta):
                return delta, Verdict("pointwise_expansivity", Outcome.HOLDS, params, horizon=T, seed=seed,
                                      details={"delta_x": delta, "ball": ball.encode()})
            continue
        others = ball.others()
        if isinstance(system, OrbitCloudSystem) and isinstance(system.base, _ShiftBase):
            # the base part is an exact shift ball; only cloud points can stay in it
            if not isinstance(x, CloudPoint) and not _limit_singleton(system.base, delta):
                witness, witness_delta = None, delta
                continue
            others = [y for y in others if isinstance(y, CloudPoint)]
        if not others and not ball.is_infinite:
            return delta, Verdict("pointwise_expansivity", Outcome.HOLDS, params, horizon=T, seed=seed,
                                  details={"delta_x": delta, "candidates_tested": ball.details.get("candidates")})
        witness, witness_delta = (others[0] if others else None), delta
    if witness is None:
        # shift ball never collapses (delta >= 1 throughout the grid); a flip far out is a witness
        y = system.neighbors(x, grid[-1], 2, seed)[0]
        witness, witness_delta = y, grid[-1]
    details = {
        "witness_delta": witness_delta,
        "witness_all_times": _all_time_witness(system, x, witness, window),
    }
    if not isinstance(system, _ShiftBase):
        details["witness_deviation"] = max_deviation(system, x, witness, window.indices())
    return None, Verdict("pointwise_expansivity", Outcome.FAILS, params, witness=system.encode_point(witness),
                         horizon=T, seed=seed, details=details)


@dataclass(frozen=True)
class Cardinality:
    """|ball|: ``kind`` is "exact", "infinite" or "lower_bound"."""

    kind: str
    count: int | None
    members: tuple = ()
    eps_x: Any = None

    def encode(self):
        out = {"kind": self.kind, "count": self.count, "members": [encode(m) for m in self.members]}
        if self.eps_x is not None:
            out["eps_x"] = encode(self.eps_x)
        return out


def n_expansive_cardinality(system: System, x, delta, T: int | None = None, budget: int = 256, seed: int = 0,
                            N: int | None = None) -> Cardinality:
    """Cardinality of the ball at x, with the reduction to an expansivity constant.

    T = None asks for the full-time ball where that is decidable (shifts, the
    identity fixtures, periodic points of the orbit cloud). When the ball is
    finite with points y_1..y_k (k <= N if given), eps_x = min d(x, y_i) is
    returned; the ball at any radius below eps_x is {x}.
    """
    if delta is None or (as_fraction(delta) if not isinstance(delta, float) else delta) <= 0:
        raise PreconditionError("delta must be positive")
    if isinstance(system, _ShiftBase):
        if _limit_singleton(system, delta) and (T is None or T >= 0):
            return Cardinality("exact", 1, (x,), eps_x=None)
        return Cardinality("infinite", None)
    window = _as_window(T if T is not None else 16, system)
    ball = _ball(system, x, delta, window, budget, seed)
    if ball.is_infinite:
        return Cardinality("infinite", None, tuple(ball.points[:8]))
    members = tuple(ball.points)
    exact = isinstance(system, AccumulatingSequenceSpace)
    others = [y for y in members if y != x]
    eps = min((system.distance(x, y) for y in others), default=None)
    if N is not None and len(members) > N:
        eps = None
    return Cardinality("exact" if exact else "lower_bound", len(members), members, eps_x=eps)
