"""Independent re-checks of certificate records written by ``run``."""
from __future__ import annotations

import json
from fractions import Fraction

from ..chaos_entropy.entropy import verify_entropy_certificate
from ..errors import DynamicsError
from ..intervals import Interval
from ..shadowing_spec.feasible import check_infeasibility
from ..shadowing_spec.mixing import check_escape_certificate
from ..shadowing_spec.specification import SpecSegments, scalar_targets, spec_errors
from ..shadowing_spec.tracing import PseudoOrbit, verify_trace
from ..systems.config import system_from_descriptor


class CertificateShapeError(ValueError):
    pass


def _entropy(system, rec):
    return verify_entropy_certificate(system, rec)


def _spec_trace(system, rec):
    spec = SpecSegments.decode(system, rec["request"])
    tracer = system.decode_point(rec["tracer"])
    errs = spec_errors(system, tracer, spec)
    return [f"time {i}: error {e} >= {spec.epsilon}" for i, e in sorted(errs.items()) if not e < spec.epsilon]


def _pseudo_orbit_trace(system, rec):
    po = PseudoOrbit.decode(system, rec["pseudo_orbit"])
    tracer = system.decode_point(rec["tracer"])
    eps = Fraction(rec["epsilon"])
    return [] if verify_trace(system, tracer, po.points, eps) else ["tracer leaves the epsilon tube"]


def _infeasible(system, rec):
    spec = SpecSegments.decode(system, rec["request"])
    targets = scalar_targets(system, spec)
    ok = check_infeasibility(system, targets, spec.epsilon, rec["certificate"])
    return [] if ok else ["feasible-set trail does not re-derive to empty"]


def _escape(system, rec):
    U, V = Interval.decode(rec["U"]), Interval.decode(rec["V"])
    return [] if check_escape_certificate(system, U, V, rec["certificate"]) else ["escape certificate rejected"]


CHECKERS = {
    "entropy_certificate": _entropy,
    "spec_trace": _spec_trace,
    "pseudo_orbit_trace": _pseudo_orbit_trace,
    "infeasible_request": _infeasible,
    "escape_certificate": _escape,
}


def verify_record(rec: dict) -> list:
    """Problems found in the record (empty list: every re-check passed)."""
    if not isinstance(rec, dict) or rec.get("kind") not in CHECKERS:
        raise CertificateShapeError(f"unknown certificate kind {rec.get('kind') if isinstance(rec, dict) else rec!r}")
    if "system" not in rec:
        raise CertificateShapeError("certificate has no system descriptor")
    if rec["kind"] == "entropy_certificate" and not rec.get("family"):
        raise CertificateShapeError("empty family")
    try:
        system = system_from_descriptor(rec["system"])
        return CHECKERS[rec["kind"]](system, rec)
    except (KeyError, TypeError) as exc:
        raise CertificateShapeError(f"malformed record: {exc}") from None
    except DynamicsError as exc:
        return [f"re-check raised {type(exc).__name__}: {exc}"]


def verify_file(path) -> list:
    try:
        with open(path) as fh:
            rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CertificateShapeError(f"cannot parse {path}: {exc}") from None
    return verify_record(rec)
