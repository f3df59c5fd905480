"""(n, eps)-separated sets, Bowen entropy estimates and entropy lower-bound certificates."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from ..errors import BudgetExceeded, PreconditionError, SeparationFailure, TracerUnavailable
from ..exact import as_fraction
from ..intervals import Interval
from ..systems.base import System
from ..systems.scalar import DoublingCircle, ScalarSystem
from ..systems.symbolic import OneSidedSeq, SymSeq, _ShiftBase, closed_agreement_radius
from ..shadowing_spec.specification import Segment, SpecSegments, spec_errors, trace_spec
from ..verdict import encode

GREEDY = "greedy_maximal"
EXACT = "exact_maximum"
EXACT_CAP = 1 << 16
FLOAT_TOL = 1e-12
DEFAULT_EPSILONS = tuple(Fraction(1, 1 << k) for k in range(1, 9))


@dataclass
class SeparatedSet:
    points: list
    n: int
    epsilon: Fraction
    maximality: str
    exact: bool = True
    candidates: int = 0

    def __len__(self):
        return len(self.points)


# -- candidates ---------------------------------------------------------------

def word_candidates(system: _ShiftBase, n: int, epsilon=Fraction(1, 2)) -> list:
    """One point per word on the window that decides (n, eps)-separation, filled with 0 elsewhere."""
    win = _shift_key_window(system, n, as_fraction(epsilon))
    if win is None:
        return [SymSeq.constant(0) if not system.one_sided else OneSidedSeq((), (0,))]
    lo, hi = win
    length = hi - lo + 1
    if system.k ** length > EXACT_CAP:
        raise BudgetExceeded(f"{system.k}^{length} window words exceed the candidate cap; "
                             "use a larger epsilon or a smaller n")
    if system.one_sided:
        return [OneSidedSeq(w, (0,)) for w in product(range(system.k), repeat=length)]
    return [SymSeq.from_window(lo, w) for w in product(range(system.k), repeat=length)]


def grid_candidates(K: Interval, count: int) -> np.ndarray:
    """Cell midpoints of a uniform grid on K (floats)."""
    lo, hi = float(K.lo), float(K.hi)
    return lo + (np.arange(count) + 0.5) * ((hi - lo) / count)


def _as_interval(K) -> Interval:
    if isinstance(K, Interval):
        return K
    lo, hi = K
    return Interval(as_fraction(lo), as_fraction(hi))


def default_region(system: System):
    if isinstance(system, ScalarSystem):
        if isinstance(system, DoublingCircle):
            return Interval(0, 1, True, False)
        hi = system.domain.hi if not math.isinf(system.domain.hi) else 1
        return Interval(system.domain.lo, hi)
    return None


# -- separation on shifts -------------------------------------------------------

def _shift_key_window(system: _ShiftBase, n: int, epsilon: Fraction):
    """d_n(a, b) <= eps iff a and b agree on this window (None: every pair conflicts)."""
    R = closed_agreement_radius(epsilon)
    if R < 0:
        return None
    return (0 if system.one_sided else -R), n - 1 + R


def dn_distance(system: System, a, b, n: int):
    """max_{0 <= i < n} d(f^i a, f^i b) and the first index attaining it (exact)."""
    best, arg = None, 0
    for i in range(n):
        d = system.distance(a, b)
        if best is None or d > best:
            best, arg = d, i
        a, b = system.map(a), system.map(b)
    return best, arg


def _shift_separated(system: _ShiftBase, cands: list, n: int, eps: Fraction) -> list:
    # conflicts are "same key", an equivalence, so first-of-class greedy is also a maximum
    win = _shift_key_window(system, n, eps)
    if win is None:
        return cands[:1]
    kept, seen = [], set()
    for c in cands:
        key = c.window(*win)
        if key not in seen:
            seen.add(key)
            kept.append(c)
    return kept


# -- separation on interval maps ----------------------------------------------

def _orbit_matrix(system: ScalarSystem, pts: np.ndarray, n: int) -> np.ndarray:
    O = np.empty((len(pts), n))
    z = pts.astype(float)
    for i in range(n):
        O[:, i] = z
        if i + 1 < n:
            z = system.map_array(z)
    return O


def _float_dist(system: ScalarSystem, a, b):
    d = np.abs(a - b)
    if isinstance(system, DoublingCircle):
        d = np.minimum(d, 1.0 - d)
    return d


def _monotone_separated(O: np.ndarray, eps: float) -> list:
    """Left-to-right greedy on sorted candidates; optimal when every f^i is nondecreasing."""
    N, n = O.shape
    nxt = np.full(N, N)
    for i in range(n):
        col = O[:, i]
        nxt = np.minimum(nxt, np.searchsorted(col, col + eps, side="right"))
    kept, cur = [], 0
    while cur < N:
        kept.append(cur)
        cur = int(nxt[cur])
    return kept


def _greedy_float(system: ScalarSystem, O: np.ndarray, eps: float) -> list:
    kept = [0]
    for c in range(1, len(O)):
        d = _float_dist(system, O[kept], O[c]).max(axis=1)
        if d.min() > eps:
            kept.append(c)
    return kept


# -- maximum independent set ----------------------------------------------------

def _max_independent(conflict: list, node_budget: int) -> list:
    """Maximum clique of the separation graph with a colour-class (clique cover) bound."""
    m = len(conflict)
    full = (1 << m) - 1
    sep = [full & ~conflict[v] & ~(1 << v) for v in range(m)]
    best: list = []
    nodes = 0

    def colour_sort(P: int):
        order, colours = [], []
        colour = 0
        while P:
            colour += 1
            Q = P
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~(1 << v)
                Q &= ~sep[v]
                P &= ~(1 << v)
                order.append(v)
                colours.append(colour)
        return order, colours

    def expand(R: list, P: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"branch and bound exceeded {node_budget} nodes")
        order, colours = colour_sort(P)
        for v, c in zip(reversed(order), reversed(colours)):
            if len(R) + c <= len(best):
                return
            R2, P2 = R + [v], P & sep[v]
            if P2:
                expand(R2, P2)
            elif len(R2) > len(best):
                best = R2
            P &= ~(1 << v)

    if m:
        expand([], full)
    return sorted(best)


def _exact_conflicts(system: System, cands: list, n: int, eps: Fraction) -> list:
    orbits = [system.orbit(c, n) for c in cands]
    conflict = [0] * len(cands)
    for a in range(len(cands)):
        for b in range(a + 1, len(cands)):
            if max(system.distance(p, q) for p, q in zip(orbits[a], orbits[b])) <= eps:
                conflict[a] |= 1 << b
                conflict[b] |= 1 << a
    return conflict


# -- public -----------------------------------------------------------------

def separated_set(system: System, K=None, n: int = 1, epsilon=Fraction(1, 2), mode: str = GREEDY,
                  count: int = 4096, seed: int = 0, candidates=None, node_budget: int = 200_000) -> SeparatedSet:
    """An (n, eps)-separated subset of the candidates drawn from K.

    Greedy mode keeps any candidate d_n-separated from all kept ones. Exact mode
    returns a maximum: on shifts conflicts are equal window words, on monotone
    interval maps the sorted greedy is optimal, otherwise branch and bound.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise PreconditionError("epsilon must be positive")
    if mode not in (GREEDY, EXACT):
        raise PreconditionError(f"unknown mode {mode!r}")
    if isinstance(system, _ShiftBase):
        cands = list(candidates) if candidates is not None else (
            word_candidates(system, n, eps) if K is None else system.sample(K, count, seed))
        if mode == EXACT and len(cands) > EXACT_CAP:
            raise BudgetExceeded("exact mode is capped at 2^16 candidates")
        kept = _shift_separated(system, cands, n, eps)
        return SeparatedSet(kept, n, eps, EXACT if mode == EXACT else GREEDY, True, len(cands))
    if isinstance(system, ScalarSystem):
        pts = (np.array([float(c) for c in candidates]) if candidates is not None
               else grid_candidates(_as_interval(K if K is not None else default_region(system)), count))
        pts = np.sort(pts)
        O = _orbit_matrix(system, pts, n)
        e = float(eps)
        if system.monotone_increasing:
            kept, maximality = _monotone_separated(O, e), EXACT
        elif mode == EXACT:
            raise BudgetExceeded(f"no exact separated-set search for {system.id} on float candidates")
        else:
            kept, maximality = _greedy_float(system, O, e), GREEDY
        if mode == GREEDY:
            maximality = GREEDY
        return SeparatedSet([float(pts[i]) for i in kept], n, eps, maximality, False, len(pts))
    cands = list(candidates) if candidates is not None else system.sample(K, count, seed)
    cands = sorted(set(cands), key=lambda c: encode(system.encode_point(c)).__repr__())
    if mode == EXACT:
        if len(cands) > EXACT_CAP:
            raise BudgetExceeded("exact mode is capped at 2^16 candidates")
        conflict = _exact_conflicts(system, cands, n, eps)
        kept = [cands[i] for i in _max_independent(conflict, node_budget)]
        return SeparatedSet(kept, n, eps, EXACT, True, len(cands))
    kept = []
    for c in cands:
        orb = system.orbit(c, n)
        if all(max(system.distance(p, q) for p, q in zip(orb, system.orbit(k, n))) > eps for k in kept):
            kept.append(c)
    return SeparatedSet(kept, n, eps, GREEDY, True, len(cands))


def validate_separated(system: System, S: SeparatedSet) -> bool:
    """Re-check every pair: d_n > eps (exact), or > eps - 1e-12 on float candidates."""
    pts = S.points
    if isinstance(system, _ShiftBase):
        win = _shift_key_window(system, S.n, S.epsilon)
        if win is None:
            return len(pts) <= 1
        if len(pts) <= 256:
            return all(dn_distance(system, a, b, S.n)[0] > S.epsilon
                       for i, a in enumerate(pts) for b in pts[i + 1:])
        keys = [p.window(*win) for p in pts]
        return len(set(keys)) == len(keys)
    if isinstance(system, ScalarSystem):
        O = _orbit_matrix(system, np.array(pts), S.n)
        for i in range(len(O) - 1):
            if _float_dist(system, O[i + 1:], O[i]).max(axis=1).min() <= float(S.epsilon) - FLOAT_TOL:
                return False
        return True
    return all(dn_distance(system, a, b, S.n)[0] > S.epsilon for i, a in enumerate(pts) for b in pts[i + 1:])


# -- entropy estimate -------------------------------------------------------------

@dataclass
class EntropyFit:
    epsilon: Fraction
    slope: float
    residual: float
    exact_log2_slope: Fraction | None = None  # slope / log 2 when all counts are powers of 2


@dataclass
class EntropyEstimate:
    system: dict
    region: str
    mode: str
    rows: list  # (epsilon, n, s_n, rate)
    fits: list
    rate: float
    residual: float
    fit_range: tuple
    exact: bool
    lower_bound_certificates: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "system": encode(self.system),
            "region": self.region,
            "mode": self.mode,
            "rows": [{"epsilon": encode(e), "n": n, "s_n": s, "rate": r} for e, n, s, r in self.rows],
            "fits": [{"epsilon": encode(f.epsilon), "slope": f.slope, "residual": f.residual,
                      "slope_over_log2": encode(f.exact_log2_slope)} for f in self.fits],
            "rate": self.rate,
            "residual": self.residual,
            "fit_range": list(self.fit_range),
            "exact": self.exact,
            "lower_bound_certificates": self.lower_bound_certificates,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "n", "s_n", "rate"])
        for e, n, s, r in self.rows:
            w.writerow([encode(e), n, s, repr(r)])
        return buf.getvalue()


def _fit(ns: list, counts: list, eps: Fraction) -> EntropyFit:
    exps = [c.bit_length() - 1 for c in counts]
    if all(c == 1 << e for c, e in zip(counts, exps)):
        nbar = Fraction(sum(ns), len(ns))
        ebar = Fraction(sum(exps), len(exps))
        sxx = sum((n - nbar) ** 2 for n in ns)
        slope = sum((n - nbar) * (e - ebar) for n, e in zip(ns, exps)) / sxx if sxx else Fraction(0)
        resid = max(abs(e - (ebar + slope * (n - nbar))) for n, e in zip(ns, exps))
        return EntropyFit(eps, float(slope) * math.log(2), float(resid) * math.log(2), slope)
    x = np.array(ns, dtype=float)
    y = np.log(np.array(counts, dtype=float))
    if len(x) > 1:
        slope, icpt = np.polyfit(x, y, 1)
    else:
        slope, icpt = 0.0, y[0]
    resid = float(np.max(np.abs(y - (slope * x + icpt))))
    return EntropyFit(eps, float(slope), resid)


def entropy_estimate(system: System, K=None, epsilon_schedule=DEFAULT_EPSILONS, n_max: int = 12,
                     mode: str = EXACT, count: int = 4096, seed: int = 0) -> EntropyEstimate:
    """Table of s_n(eps, K) with the best line through log s_n over n in [n_max/2, n_max].

    The reported rate is the largest slope over the schedule, with its residual.
    K may be a list of regions; the estimate for the region with the largest rate
    is returned.
    """
    if n_max < 2:
        raise PreconditionError("n_max must be at least 2")
    eps_list = [as_fraction(e) for e in epsilon_schedule]
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise PreconditionError("epsilon schedule must be decreasing")
    if isinstance(K, list):
        results = [entropy_estimate(system, k, eps_list, n_max, mode, count, seed) for k in K]
        return max(results, key=lambda r: r.rate)
    lo_n = max(1, -(-n_max // 2))
    rows, fits, exact = [], [], True
    for eps in eps_list:
        ns, counts = [], []
        for n in range(1, n_max + 1):
            S = separated_set(system, K, n, eps, mode, count, seed)
            exact = exact and S.exact and S.maximality == EXACT
            s = len(S)
            rows.append((eps, n, s, math.log(s) / n))
            if n >= lo_n:
                ns.append(n)
                counts.append(s)
        fits.append(_fit(ns, counts, eps))
    best = max(fits, key=lambda f: f.slope)
    region = "window words" if K is None and isinstance(system, _ShiftBase) else str(encode(K))
    return EntropyEstimate(system.descriptor(), region, mode, rows, fits, best.slope, best.residual,
                           (lo_n, n_max), exact)


# -- lower bound from two specification points -----------------------------------

@dataclass
class EntropyCertificate:
    system: System
    x: object
    y: object
    epsilon: Fraction
    M: int
    n: int
    tuples: list
    family: list
    witnesses: list  # (a, b, index, distance)
    extended: bool = False

    @property
    def horizon(self) -> int:
        return (self.n + 1) * self.M

    @property
    def bound(self) -> float:
        return math.log(2) / self.M

    def to_dict(self) -> dict:
        enc = self.system.encode_point
        return {
            "kind": "entropy_certificate",
            "system": encode(self.system.descriptor()),
            "x": enc(self.x),
            "y": enc(self.y),
            "epsilon": encode(self.epsilon),
            "M": self.M,
            "n": self.n,
            "horizon": self.horizon,
            "extended": self.extended,
            "tuples": ["".join("x" if z == self.x else "y" for z in t) for t in self.tuples],
            "family": [enc(p) for p in self.family],
            "witnesses": [[a, b, i, encode(d)] for a, b, i, d in self.witnesses],
            "bound": "log(2)/M",
            "bound_value": self.bound,
        }


def _tuple_request(system: System, t: tuple, M: int, epsilon: Fraction) -> SpecSegments:
    # the tracer must sit near z_i itself at time iM, so the segment point is f^{-iM}(z_i)
    segs = []
    for i, z in enumerate(t):
        point = z if i == 0 or not system.caps.invertible else system.iterate(z, -i * M)
        if i > 0 and not system.caps.invertible and system.iterate(z, i * M) != z:
            raise TracerUnavailable("non-invertible system needs fixed specification points")
        segs.append(Segment(i * M, i * M, point))
    return SpecSegments(segs, M, epsilon)


def entropy_certificate_from_spec_points(system: System, x, y, epsilon, M: int, n: int,
                                         seed: int = 0) -> EntropyCertificate:
    """2^{n+1} tracers of the {x, y}-tuples at times 0, M, ..., nM, pairwise ((n+1)M, eps)-separated.

    Every pair is re-checked exactly; a collision triggers one extra segment at
    time (n+1)M as in the surjectivity extension, and a surviving non-separated
    pair raises SeparationFailure with the pair as witness.
    """
    eps = as_fraction(epsilon)
    if x == y:
        raise PreconditionError("x and y must be distinct")
    if not system.distance(x, y) > 3 * eps:
        raise PreconditionError("need d(x, y) > 3 eps")
    if M < 1 or n < 0:
        raise PreconditionError("need M >= 1 and n >= 0")
    tuples = [t for first in (x, y) for t in ((first,) + rest for rest in product((x, y), repeat=n))]
    for extended in (False, True):
        family = []
        for t in tuples:
            full = t + ((t[-1],) if extended else ())
            spec = _tuple_request(system, full, M, eps)
            res = trace_spec(system, x if full[0] == x else y, spec, seed=seed)
            if not res.ok:
                raise TracerUnavailable(f"no tracer for tuple {len(family)}: {res.reason}")
            family.append(res.tracer)
        if len(set(family)) == len(family) or extended:
            break
    N = (n + 1) * M
    witnesses = []
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            d, i = dn_distance(system, family[a], family[b], N)
            if not d > eps:
                raise SeparationFailure(f"tracers {a} and {b} are not ({N}, {eps})-separated",
                                        witness={"pair": [a, b], "distance": d})
            witnesses.append((a, b, i, d))
    return EntropyCertificate(system, x, y, eps, M, n, tuples, family, witnesses, extended)


def verify_entropy_certificate(system: System, data: dict) -> list:
    """Independent re-check of an encoded certificate; returns a list of problems (empty if valid)."""
    problems = []
    try:
        eps = Fraction(data["epsilon"])
        M, n = int(data["M"]), int(data["n"])
        x, y = system.decode_point(data["x"]), system.decode_point(data["y"])
        family = [system.decode_point(p) for p in data["family"]]
        tuples = data["tuples"]
    except (KeyError, TypeError, ValueError) as exc:
        return [f"malformed certificate: {exc}"]
    if not family:
        return ["empty family"]
    if len(family) != 2 ** (n + 1) or len(tuples) != len(family):
        problems.append(f"family has {len(family)} points, expected {2 ** (n + 1)}")
    if not system.distance(x, y) > 3 * eps:
        problems.append("d(x, y) <= 3 eps")
    horizon = (n + 1) * M
    for k, (p, word) in enumerate(zip(family, tuples)):
        for i, c in enumerate(word):
            z = x if c == "x" else y
            if not system.distance(system.iterate(p, i * M), z) < eps:
                problems.append(f"tracer {k} misses its target at time {i * M}")
                break
    recorded = {(int(a), int(b)): (int(i), Fraction(d)) for a, b, i, d in data.get("witnesses", [])}
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            rec = recorded.get((a, b))
            if rec is None:
                problems.append(f"pair ({a}, {b}) has no witness")
                continue
            i, d = rec
            actual = system.distance(system.iterate(family[a], i), system.iterate(family[b], i))
            if not (0 <= i < horizon) or actual != d or not actual > eps:
                problems.append(f"pair ({a}, {b}) fails at index {i}: distance {actual}")
    return problems
