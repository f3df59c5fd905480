"""Concrete dynamical systems and the protocol they share."""
from .base import (
    Ball,
    Capabilities,
    System,
    distance,
    interval_image,
    iterate,
    orbit_distance,
    periodic_points,
    prime_period,
    sample,
)
from .config import SYSTEM_KEYS, make_system, system_from_descriptor, system_from_section
from .fixtures import AccumulatingSequenceSpace, CloudPoint, OrbitCloudSystem
from .scalar import DoublingCircle, DoublingRay, IdentityInterval, ScalarSystem, SquaringMap, TentMap
from .symbolic import (
    Cylinder,
    FullShift,
    OneSidedSeq,
    OneSidedShift,
    SymSeq,
    ball_cylinder,
    closed_agreement_radius,
    open_agreement_radius,
)


def make_orbit_cloud_system(base=None, p=None, t=None, levels: int = 64) -> OrbitCloudSystem:
    """Orbit cloud over ``base`` at the periodic point ``p`` of prime period ``t``."""
    return OrbitCloudSystem(base, p, t, levels)
