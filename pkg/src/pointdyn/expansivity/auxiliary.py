"""Horizon checks for limit sets, asymptotic pairs, local stable/unstable sets,
sinks, canonical coordinates and expansivity of the periodic restriction."""
from __future__ import annotations

import math
from fractions import Fraction

from ..errors import CapabilityMissing, NonInvertible, PreconditionError
from ..systems.base import System
from ..systems.fixtures import AccumulatingSequenceSpace
from ..systems.symbolic import FullShift, SymSeq
from ..verdict import Outcome, Verdict
from .balls import DEFAULT_DELTA_GRID, first_violation


def _need_inverse(system: System, what: str):
    if not system.caps.invertible:
        raise NonInvertible(f"{what} needs an invertible map; {system.id} is not")


def _diameter_from(system, pts) -> tuple:
    """(diameter, i, j) of a finite list of points."""
    best = (0, 0, 0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = system.distance(pts[i], pts[j])
            if d > best[0]:
                best = (d, i, j)
    return best


def _settling_index(system, tail: list, tol, max_m: int):
    """Least m <= max_m with diam(tail[m:]) <= tol, else None, plus the diameter at max_m."""
    for m in range(max_m + 1):
        diam, i, j = _diameter_from(system, tail[m:])
        if diam <= tol:
            return m, None
    diam, i, j = _diameter_from(system, tail[max_m:])
    return None, (max_m + i, max_m + j, diam)


def converging_semiorbit_check(system: System, x, T: int, tol, forward_only: bool = False) -> Verdict:
    """Both semi-orbits of x settle: the tails from some m <= T/2 to T have diameter <= tol.

    ``forward_only`` checks the omega side alone, for maps without inverse.
    """
    if not forward_only:
        _need_inverse(system, "converging semiorbit")
    params = {"x": system.encode_point(x), "T": T, "tol": tol, "forward_only": forward_only}
    fwd = system.orbit(x, T + 1)
    m_f, bad_f = _settling_index(system, fwd, tol, T // 2)
    sides = {"omega": (m_f, bad_f, fwd)}
    if not forward_only:
        bwd = [x]
        for _ in range(T):
            bwd.append(system.inverse(bwd[-1]))
        sides["alpha"] = _settling_index(system, bwd, tol, T // 2) + (bwd,)
    for side, (m, bad, _) in sides.items():
        if m is None:
            i, j, diam = bad
            return Verdict("converging_semiorbit", Outcome.FAILS, params, horizon=T,
                           witness={"side": side, "i": i, "j": j, "diameter": diam})
    details = {f"{side}_limit": system.encode_point(pts[-1]) for side, (_, _, pts) in sides.items()}
    details.update({f"{side}_settles_at": m for side, (m, _, _) in sides.items()})
    return Verdict("converging_semiorbit", Outcome.HOLDS, params, horizon=T, details=details)


def in_converging_set(system: System, z, x, y, n: int, m: int, T: int) -> bool:
    """z in A(x, y, n, m) up to T: max(d(f^-i z, x), d(f^i z, y)) <= 1/n for m <= i <= T."""
    _need_inverse(system, "A(x, y, n, m)")
    bound = Fraction(1, n)
    orbit = system.orbit_window(z, -T, T)
    return all(system.distance(orbit[-i], x) <= bound and system.distance(orbit[i], y) <= bound
               for i in range(m, T + 1))


def asymptotic_pair_check(system: System, y, p, q, T: int, tol) -> Verdict:
    """y forward-asymptotic to p and backward-asymptotic to q from some N <= T/2 on."""
    _need_inverse(system, "asymptotic pair")
    params = {"y": system.encode_point(y), "p": system.encode_point(p), "q": system.encode_point(q),
              "T": T, "tol": tol}
    oy, op, oq = (system.orbit_window(z, -T, T) for z in (y, p, q))
    fwd_bad = [i for i in range(T + 1) if system.distance(oy[i], op[i]) > tol]
    bwd_bad = [i for i in range(T + 1) if system.distance(oy[-i], oq[-i]) > tol]
    N = max(max(fwd_bad, default=-1), max(bwd_bad, default=-1)) + 1
    if N <= T // 2:
        return Verdict("asymptotic_pair", Outcome.HOLDS, params, horizon=T, details={"N": N})
    side, idx = ("forward", fwd_bad[-1]) if fwd_bad and fwd_bad[-1] >= N - 1 else ("backward", -bwd_bad[-1])
    return Verdict("asymptotic_pair", Outcome.FAILS, params, horizon=T, witness={"side": side, "index": idx})


def local_stable_membership(system: System, y, x, delta, T: int) -> Verdict:
    """y in W^s(x, delta) up to T: d(f^i x, f^i y) <= delta for 0 <= i <= T."""
    return _local_membership(system, y, x, delta, T, list(range(T + 1)), "local_stable")


def local_unstable_membership(system: System, y, x, delta, T: int) -> Verdict:
    """y in W^u(x, delta) up to T: d(f^i x, f^i y) <= delta for -T <= i <= 0."""
    _need_inverse(system, "local unstable set")
    return _local_membership(system, y, x, delta, T, list(range(0, -T - 1, -1)), "local_unstable")


def _local_membership(system, y, x, delta, T, indices, name) -> Verdict:
    params = {"y": system.encode_point(y), "x": system.encode_point(x), "delta": delta, "T": T}
    bad = first_violation(system, x, y, delta, indices)
    if bad is None:
        return Verdict(name, Outcome.HOLDS, params, horizon=T)
    dist = system.distance(system.iterate(x, bad), system.iterate(y, bad))
    return Verdict(name, Outcome.FAILS, params, horizon=T, witness={"index": bad, "distance": dist})


def sink_check(system: System, x, delta, T: int, budget: int = 64, seed: int = 0) -> Verdict:
    """Holds when no candidate y != x lies in W^u(x, delta) up to T."""
    _need_inverse(system, "sink check")
    params = {"x": system.encode_point(x), "delta": delta, "T": T, "budget": budget}
    indices = list(range(0, -T - 1, -1))
    for y in system.neighbors(x, delta, budget, seed):
        if y != x and first_violation(system, x, y, delta, indices) is None:
            return Verdict("sink", Outcome.FAILS, params, witness=system.encode_point(y), horizon=T, seed=seed)
    return Verdict("sink", Outcome.HOLDS, params, horizon=T, seed=seed)


def _in_both(system, z, x, y, eps, T) -> bool:
    return (first_violation(system, x, z, eps, list(range(T + 1))) is None
            and first_violation(system, y, z, eps, list(range(0, -T - 1, -1))) is None)


def product_point(system: System, x, y, eps, T: int, budget: int = 64, seed: int = 0):
    """A point of W^s(x, eps) n W^u(y, eps) up to T, or None.

    On the full shift the splice (past of y, future of x) is tried first.
    """
    cands = [x, y]
    if isinstance(system, FullShift):
        cands.insert(0, SymSeq.splice(y, 0, x))
    cands += system.neighbors(x, eps, budget, seed) + system.neighbors(y, eps, budget, seed)
    for z in cands:
        if _in_both(system, z, x, y, eps, T):
            return z
    return None


def canonical_coordinates_check(system: System, eps, delta_grid=DEFAULT_DELTA_GRID[1:], pair_budget: int = 32,
                                T: int = 8, seed: int = 0, region=None) -> Verdict:
    """Search for a grid delta with W^s(x, eps) n W^u(y, eps) != {} whenever d(x, y) < delta.

    Pairs are drawn from ``region`` (whole space if None). A failure is only
    certified when the candidate search is exhaustive (identity fixtures).
    """
    _need_inverse(system, "canonical coordinates")
    params = {"eps": eps, "delta_grid": list(delta_grid), "pair_budget": pair_budget, "T": T}
    exhaustive = isinstance(system, AccumulatingSequenceSpace)
    last_bad = None
    for delta in delta_grid:
        if exhaustive:
            xs = list(range(-12, 13)) + (["a", "b"] if system.include_limits else [])
        else:
            xs = system.sample(region, pair_budget, seed)
        bad = None
        pairs = 0
        for x in xs:
            for y in [x] + system.neighbors(x, delta, 4, seed):
                if system.distance(x, y) >= delta:
                    continue
                pairs += 1
                if product_point(system, x, y, eps, T, seed=seed) is None:
                    bad = (x, y)
                    break
            if bad:
                break
        if bad is None:
            return Verdict("canonical_coordinates", Outcome.HOLDS, params, horizon=T, seed=seed,
                           details={"delta": delta, "pairs_tested": pairs})
        last_bad = bad
    x, y = last_bad
    outcome = Outcome.FAILS if exhaustive else Outcome.INCONCLUSIVE
    return Verdict("canonical_coordinates", outcome, params, horizon=T, seed=seed,
                   witness={"x": system.encode_point(x), "y": system.encode_point(y)})


def periodic_restriction_expansivity(system: System, delta_grid=DEFAULT_DELTA_GRID, period_bound: int = 4,
                                     T: int | None = None) -> Verdict:
    """Each enumerated periodic p has a grid delta_p whose ball holds no other enumerated periodic point.

    Two periodic orbits are compared over one common period, which decides every n;
    ``T`` caps that comparison when given.
    """
    if not system.caps.enumerates_periodic:
        raise CapabilityMissing(f"{system.id} does not enumerate periodic points")
    pts = []
    for per in range(1, period_bound + 1):
        for p in system.periodic_points(per):
            if p not in pts:
                pts.append(p)
    periods = {}
    for p in pts:
        q, n = system.map(p), 1
        while q != p:
            q, n = system.map(q), n + 1
        periods[p] = n
    params = {"delta_grid": list(delta_grid), "period_bound": period_bound, "T": T}
    constants = {}
    for p in pts:
        chosen = None
        for delta in delta_grid:
            intruder = None
            for q in pts:
                if q == p:
                    continue
                L = math.lcm(periods[p], periods[q])
                horizon = L if T is None else min(L, T + 1)
                if first_violation(system, p, q, delta, list(range(horizon))) is None:
                    intruder = q
                    break
            if intruder is None:
                chosen = delta
                break
        if chosen is None:
            return Verdict("periodic_restriction_expansivity", Outcome.FAILS, params, horizon=T,
                           witness={"p": system.encode_point(p), "q": system.encode_point(intruder),
                                    "delta": delta_grid[-1]})
        constants[system.encode_point(p)] = chosen
    return Verdict("periodic_restriction_expansivity", Outcome.HOLDS, params, horizon=T,
                   details={"points": len(pts), "delta_p": constants})
