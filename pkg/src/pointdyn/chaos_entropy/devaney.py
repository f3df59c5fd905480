"""Sensitivity, dense periodicity and Devaney chaos at a single point."""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..errors import NoPeriodicInNeighborhood, NoTransitiveVisit, NotPeriodic, PreconditionError
from ..exact import as_fraction
from ..intervals import Interval
from ..systems.base import Ball, System, orbit_distance, prime_period
from ..systems.scalar import DoublingCircle, ScalarSystem
from ..systems.symbolic import Cylinder, OneSidedSeq, SymSeq, _ShiftBase, open_agreement_radius
from ..shadowing_spec.feasible import _exact_ok, orbit_enclosures
from ..shadowing_spec.mixing import cylinder_point, mixing_transition_time, scalar_connector, transitive_point_verdict
from ..shadowing_spec.specification import Segment, SpecSegments, specification_trace_symbolic, symbolic_window_radius
from ..verdict import Outcome, Verdict, weakest


def default_sensitivity_constant(system: System) -> Fraction:
    if isinstance(system, _ShiftBase):
        return Fraction(1, 2)
    return Fraction(1, 8)


def _largest_dyadic_at_most(r: Fraction) -> Fraction:
    k = 0
    while Fraction(1, 1 << k) > r:
        k += 1
    return Fraction(1, 1 << k)


def _structured_neighbors(system: System, x, radius) -> list:
    if isinstance(system, _ShiftBase):
        m = open_agreement_radius(radius) + 1
        flip = lambda s: (s + 1) % system.k
        if system.one_sided:
            core = list(x.window(0, m))
            core[m] = flip(core[m])
            return [OneSidedSeq(core + list(x.window(m + 1, m + len(x.core) + len(x.tail))), x.tail)]
        return [x.with_coords({m: flip(x[m])}), x.with_coords({-m: flip(x[-m])})]
    if isinstance(system, ScalarSystem):
        h = _largest_dyadic_at_most(as_fraction(radius) / 4)
        out = []
        for y in (x + h, x - h):
            if isinstance(system, DoublingCircle):
                out.append(y % 1)
            elif system.domain.contains(y):
                out.append(y)
        return out
    return []


def _separations(system: System, x, y, T: int):
    """(n, d) for n = 1..T, d = d(f^n x, f^n y) or a certified lower bound on it.

    Maps whose exact orbits grow in bit size (x -> x^2) use outward-rounded
    enclosures and the gap between them.
    """
    if isinstance(system, ScalarSystem) and not _exact_ok(system):
        ex = orbit_enclosures(system, x, range(1, T + 1))
        ey = orbit_enclosures(system, y, range(1, T + 1))
        for n in range(1, T + 1):
            a, b = ex[n], ey[n]
            yield n, max(Fraction(0), a.lo - b.hi, b.lo - a.hi)
        return
    fx, fy = x, y
    for n in range(1, T + 1):
        fx, fy = system.map(fx), system.map(fy)
        yield n, system.distance(fx, fy)


def sensitivity_witness(system: System, x, radii, T: int = 64, budget: int = 64, seed: int = 0,
                        delta_x=None) -> Verdict:
    """For each radius, y with d(x, y) < radius and n <= T with d(f^n x, f^n y) > delta_x.

    Never fails: a missing witness only means the budget ran out.
    """
    if not radii:
        raise PreconditionError("radii must be nonempty")
    dx = as_fraction(delta_x) if delta_x is not None else default_sensitivity_constant(system)
    params = {"x": system.encode_point(x), "radii": [as_fraction(r) for r in radii], "T": T, "budget": budget,
              "delta_x": dx}
    found = []
    for r in params["radii"]:
        hit = None
        candidates = _structured_neighbors(system, x, r) + system.neighbors(x, r, budget, seed)
        for y in candidates[: budget + 2]:
            if y == x or not system.distance(x, y) < r:
                continue
            for n, d in _separations(system, x, y, T):
                if d > dx:
                    hit = {"radius": r, "y": system.encode_point(y), "n": n, "distance": d}
                    break
            if hit:
                break
        if hit is None:
            return Verdict("sensitivity", Outcome.INCONCLUSIVE, params, horizon=T, seed=seed,
                           details={"radius": r, "reason": "no separating neighbour within budget"})
        found.append(hit)
    return Verdict("sensitivity", Outcome.HOLDS, params, witness=found, horizon=T, seed=seed)


# -- sensitivity from a transitive point and nearby periodic points -------------

def _nearby_periodic(system: System, x, rho: Fraction, period_bound: int):
    """A periodic p != x with d(x, p) < rho."""
    if isinstance(system, _ShiftBase):
        R = max(open_agreement_radius(rho), 0)
        for extra in range(0, 64):
            if system.one_sided:
                p = OneSidedSeq.periodic(x.window(0, R + extra))
            else:
                p = SymSeq.periodic(x.window(-R, R + extra), start=-R)
            if p != x and system.distance(x, p) < rho:
                return p
        # x is itself periodic: flip one symbol just past the agreement window
        w = list(x.window(0, R + 1) if system.one_sided else x.window(-R, R + 1))
        w[-1] = (w[-1] + 1) % system.k
        p = OneSidedSeq.periodic(tuple(w)) if system.one_sided else SymSeq.periodic(tuple(w), start=-R)
        if p != x and system.distance(x, p) < rho:
            return p
        raise NoPeriodicInNeighborhood("window periodizations all equal x")
    if isinstance(system, DoublingCircle):
        for m in range(1, 64):
            den = (1 << m) - 1
            j = round(x * den)
            for cand in (j, j + 1, j - 1):
                p = Fraction(cand % den, den)
                if p != x and system.distance(x, p) < rho:
                    return p
        raise NoPeriodicInNeighborhood("no dyadic-period point close enough")
    if system.caps.enumerates_periodic:
        for period in range(1, period_bound + 1):
            for p in system.periodic_points(period):
                if p != x and system.distance(x, p) < rho:
                    return p
    raise NoPeriodicInNeighborhood(f"no periodic point within {rho} up to period {period_bound}")


def _transitive_visit(system: System, x, rho, q, n: int, eta, T: int):
    """(y, k) with d(x, y) < rho, k >= 1 and d(f^{k+i} y, f^i q) < eta for 0 <= i <= n."""
    if isinstance(system, _ShiftBase):
        R_eta = open_agreement_radius(eta)
        R = open_agreement_radius(rho)
        lo = 0 if system.one_sided else -R_eta
        W = Cylinder()
        for i in range(n + 1):
            W = W.intersect(Cylinder.around(q.shift(i), lo, R_eta).preimage(i))
        near_x = Cylinder.around(x, 0 if system.one_sided else -R, R) if R >= 0 else Cylinder()
        k = max(1, R + 1 - min(W.positions, default=0))
        meet = near_x.intersect(W.preimage(k))
        if meet is None:
            raise NoTransitiveVisit("cylinder windows overlap")
        if system.one_sided:
            y = cylinder_point(system, meet)
        else:
            y = x.with_coords(meet.as_dict())
        return y, k
    if isinstance(system, DoublingCircle):
        # an arc of radius eta / 2^n around q stays eta-close to q for n doublings
        r = eta / (1 << n)
        U = Interval(x - rho, x + rho, False, False)
        V = Interval(q - r, q + r, False, False)
        tr = mixing_transition_time(system, Ball(x, rho), Ball(q, r), T)
        if tr.kind != "time":
            raise NoTransitiveVisit(f"no visit within {T} steps")
        k = max(tr.N, 1)
        # arcs that wrap past 0 are pulled back through each lift to [0, 1)
        for su, sv in product((0, 1, -1), repeat=2):
            y = scalar_connector(system, Interval.open(U.lo + su, U.hi + su), Interval.open(V.lo + sv, V.hi + sv), k)
            if y is not None:
                return y % 1, k
        raise NoTransitiveVisit("could not realize the visit")
    if isinstance(system, ScalarSystem) and system.caps.exact_interval_image:
        tr = mixing_transition_time(system, Ball(x, rho), Ball(q, eta / (1 << (2 * n + 2))), T)
        if tr.kind == "time":
            k = max(tr.N, 1)
            y = scalar_connector(system, system.to_interval(Ball(x, rho)),
                                 system.to_interval(Ball(q, eta / (1 << (2 * n + 2)))), k)
            if y is not None:
                return y, k
    raise NoTransitiveVisit(f"no visit found for {system.id}")


def sensitivity_constant_from_periodic(system: System, x, q, N=None, T: int = 64, period_bound: int = 12) -> Verdict:
    """Run the construction turning a transitive point with nearby periodic points into a sensitive one.

    delta = 2 d(x, O(q)) and eta = delta / 8. A periodic p near x (prime period n),
    a visitor y near x whose orbit enters W = {z : d(f^i z, f^i q) < eta, 0 <= i <= n}
    at time k, and j = floor(k/n + 1) give d(f^{nj} p, f^{nj} x) > eta or
    d(f^{nj} x, f^{nj} y) > eta. The realized side is recomputed exactly.
    """
    per = prime_period(system, q, 4096)
    if per is None:
        raise NotPeriodic("q is not periodic within 4096 steps")
    d_orbit = orbit_distance(system, x, q, per)
    if d_orbit == 0:
        raise PreconditionError("x lies on the orbit of q")
    delta = 2 * d_orbit
    eta = delta / 8
    rho = eta
    if N is not None:
        if not isinstance(N, Ball) or N.center != x:
            raise PreconditionError("N must be a ball centred at x")
        rho = min(rho, N.radius)
    params = {"x": system.encode_point(x), "q": system.encode_point(q), "T": T}
    try:
        p = _nearby_periodic(system, x, rho, period_bound)
        n = prime_period(system, p, 1 << 16)
        y, k = _transitive_visit(system, x, rho, q, n, eta, T)
    except (NoPeriodicInNeighborhood, NoTransitiveVisit) as exc:
        return Verdict("sensitivity_from_periodic", Outcome.INCONCLUSIVE, params,
                       details={"delta": delta, "eta": eta, "reason": str(exc), "error": type(exc).__name__})
    j = k // n + 1
    t = n * j
    d_p = system.distance(system.iterate(p, t), system.iterate(x, t))
    d_y = system.distance(system.iterate(x, t), system.iterate(y, t))
    witness = {"delta": delta, "eta": eta, "p": system.encode_point(p), "n": n,
               "y": system.encode_point(y), "k": k, "j": j, "time": t}
    if d_p > eta:
        witness.update(side="periodic", distance=d_p)
    elif d_y > eta:
        witness.update(side="visitor", distance=d_y)
    else:  # only reachable if an input violated the construction's hypotheses
        return Verdict("sensitivity_from_periodic", Outcome.INCONCLUSIVE, params, witness=witness,
                       details={"reason": "neither disjunct exceeds eta", "d_p": d_p, "d_y": d_y})
    return Verdict("sensitivity_from_periodic", Outcome.HOLDS, params, witness=witness, horizon=t)


def verify_sensitivity_witness(system: System, x, witness: dict) -> bool:
    """Re-evaluate the realized disjunct from the raw witness."""
    eta = Fraction(witness["eta"])
    t = int(witness["time"])
    other = system.decode_point(witness["p"] if witness["side"] == "periodic" else witness["y"])
    if witness["side"] == "periodic" and system.iterate(other, t) != other:
        return False
    return system.distance(system.iterate(x, t), system.iterate(other, t)) > eta


# -- dense periodic points ------------------------------------------------------

def _far_point(system: _ShiftBase, x, period: int, eps, R: int):
    """A point w with d(w, O(x)) > eps, or None when the window is too short to avoid the orbit."""
    orbit = [x.shift(i) for i in range(period)]
    # d(w, z) > eps iff w and z disagree within |n| < log2(1/eps)

    lo = 0 if system.one_sided else -R
    length = R - lo + 1
    if system.k ** length > 1 << 16:
        return None
    seen = {z.window(lo, R) for z in orbit}
    for word in product(range(system.k), repeat=length):
        if word in seen:
            continue
        w = (OneSidedSeq(word, (0,)) if system.one_sided else SymSeq.from_window(lo, word))
        if orbit_distance(system, w, x, period) > eps:
            return w
    return None


def _shifted_back(system: _ShiftBase, w, M: int):
    if system.one_sided:
        return OneSidedSeq((0,) * M + w.window(0, len(w.core) + len(w.tail)), w.tail)
    return w.shift(-M)


def periodic_point_near(system: _ShiftBase, x, eps) -> tuple:
    """(z, branch): a periodic tracer z != x with d(x, z) < eps from a two-segment request.

    The request is (0, 0, x) and (M, M, x_2). For non-periodic x any x_2 works.
    For periodic x the far-point branch picks x_2 with d(f^M x_2, O(x)) > eps;
    when no such point exists at this scale it uses f^M x_2 = f^M x with
    coordinate 0 flipped, which also forces z != x.
    """
    eps = as_fraction(eps)
    R = symbolic_window_radius(eps)
    M = 2 * R + 1
    period = x.period() if hasattr(x, "period") else None
    if system.one_sided and x.is_periodic():
        period = len(x.tail) if not x.core else None
    branch = "arbitrary"
    x2 = x
    if period is not None:
        w = _far_point(system, x, period, eps, R)
        if w is not None:
            branch = "far_point"
        else:
            branch = "differing_point"
            fx = system.iterate(x, M)
            if system.one_sided:
                w = OneSidedSeq(((fx[0] + 1) % system.k,) + fx.window(1, len(fx.core) + len(fx.tail)), fx.tail)
            else:
                w = fx.with_coords({0: (fx[0] + 1) % system.k})
        x2 = _shifted_back(system, w, M)
    spec = SpecSegments([Segment(0, 0, x), Segment(M, M, x2)], M, eps)
    res = specification_trace_symbolic(system, spec, periodic=True)
    return res.tracer, branch, M


def dense_periodic_at_point(system: System, x, radii, period_bound: int = 12, budget: int = 64,
                            seed: int = 0) -> Verdict:
    """Every deleted ball B(x, r) minus {x} holds a periodic point, for r in radii.

    Shifts use periodic specification tracers. Other systems search the
    enumerated periodic points, then neighbours whose orbit returns. Failure
    needs the full periodic set to be known and to miss the deleted ball.
    """
    params = {"x": system.encode_point(x), "radii": [as_fraction(r) for r in radii], "period_bound": period_bound}
    found = []
    for r in params["radii"]:
        if isinstance(system, _ShiftBase):
            z, branch, M = periodic_point_near(system, x, r)
            if z == x or not system.distance(x, z) < r:
                raise AssertionError("periodic tracer left the deleted ball")
            found.append({"radius": r, "z": system.encode_point(z), "branch": branch, "M": M})
            continue
        z = None
        finite = system.all_periodic_points() if isinstance(system, ScalarSystem) else None
        pool = list(finite) if finite is not None else []
        if finite is None and system.caps.enumerates_periodic:
            for period in range(1, period_bound + 1):
                pool.extend(system.periodic_points(period))
        for p in pool:
            if p != x and system.distance(x, p) < r:
                z = p
                break
        if z is None and finite is None:
            for y in system.neighbors(x, r, budget, seed):
                if y != x and system.distance(x, y) < r and prime_period(system, y, period_bound) is not None:
                    z = y
                    break
        if z is None:
            if finite is not None:
                witness = {"radius": r, "periodic_set": finite}
                return Verdict("dense_periodic", Outcome.FAILS, params, witness=witness, seed=seed)
            return Verdict("dense_periodic", Outcome.INCONCLUSIVE, params, seed=seed,
                           details={"radius": r, "reason": f"none found up to period {period_bound}"})
        found.append({"radius": r, "z": system.encode_point(z)})
    return Verdict("dense_periodic", Outcome.HOLDS, params, witness=found, seed=seed)


# -- Devaney ------------------------------------------------------------------

def devaney_point_verdict(system: System, x, radii, probe_regions, n_max: int = 32, T: int = 64,
                          period_bound: int = 12, budget: int = 64, seed: int = 0, delta_x=None) -> Verdict:
    """Transitive, dense periodic and sensitive at x; the outcome is the weakest of the three."""
    subs = {
        "transitive": transitive_point_verdict(system, x, radii, probe_regions, n_max),
        "dense_periodic": dense_periodic_at_point(system, x, radii, period_bound, budget, seed),
        "sensitive": sensitivity_witness(system, x, radii, T, budget, seed, delta_x),
    }
    params = {"x": system.encode_point(x), "radii": [as_fraction(r) for r in radii], "probes": len(probe_regions),
              "n_max": n_max, "T": T, "period_bound": period_bound, "budget": budget}
    outcome = weakest(v.outcome for v in subs.values())
    return Verdict("devaney_point", outcome, params, seed=seed,
                   details={name: v.to_dict() for name, v in subs.items()})


def probe_balls(system: System, count: int, radius, seed: int = 0) -> list:
    """Seeded probe regions: balls of the given radius at sampled centres."""
    return [Ball(c, as_fraction(radius)) for c in system.sample(None, count, seed)]
