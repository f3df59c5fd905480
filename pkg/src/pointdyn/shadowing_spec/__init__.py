"""Pseudo-orbit tracing, mixing transitions and specification tracers."""
from .feasible import check_infeasibility, forward_infeasibility, orbit_enclosures, trace_targets
from .mixing import (
    Transition,
    check_escape_certificate,
    escape_certificate,
    mixing_point_verdict,
    mixing_transition_time,
    transitive_point_verdict,
)
from .specification import (
    DEFAULT_M_GRID,
    Segment,
    SpecSegments,
    default_battery,
    specification_point_verdict,
    specification_trace_glued,
    specification_trace_scalar,
    specification_trace_symbolic,
    spec_errors,
    trace_spec,
    verify_spec_trace,
)
from .tracing import (
    DEFAULT_SHADOW_DELTAS,
    PseudoOrbit,
    TraceFailure,
    TraceResult,
    perturbed_orbit,
    shadowable_point_verdict,
    trace,
    verify_trace,
)

__all__ = [n for n in dir() if not n.startswith("_")]
