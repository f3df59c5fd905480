"""Three-valued verdicts and JSON-shaped encoding of exact values.

Every infinitary property is checked at an explicit horizon, so the result
is never a plain bool: it either holds up to the tested horizon, fails with
a witness that can be re-checked, or is inconclusive.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def shard_seed(master: int, index: int) -> int:
    """Seed for the ``index``-th parallel shard of a run seeded with ``master``."""
    return (master ^ ((index * GOLDEN_GAMMA) & MASK64)) & MASK64


class Outcome(str, enum.Enum):
    HOLDS = "holds_up_to_horizon"
    FAILS = "fails_with_witness"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {Outcome.HOLDS: 0, Outcome.FAILS: 1, Outcome.INCONCLUSIVE: 2}[self]


def weakest(outcomes) -> Outcome:
    outcomes = list(outcomes)
    if Outcome.FAILS in outcomes:
        return Outcome.FAILS
    if Outcome.INCONCLUSIVE in outcomes:
        return Outcome.INCONCLUSIVE
    return Outcome.HOLDS


def encode(value: Any) -> Any:
    """Map exact values onto JSON-compatible data.

    Fractions become ``"num/den"`` strings, points use their own ``encode``
    method, containers are encoded recursively.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if hasattr(value, "encode") and callable(value.encode):
        return value.encode()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [encode(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items.sort(key=repr)
        return items
    try:
        import numpy as np

        if isinstance(value, np.generic):
            return encode(value.item())
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot encode {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def dumps(payload: Any) -> str:
    return json.dumps(encode(payload), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Verdict:
    operation: str
    outcome: Outcome
    params: dict = field(default_factory=dict)
    witness: Any = None
    horizon: int | None = None
    seed: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.outcome is Outcome.INCONCLUSIVE

    @property
    def exit_code(self) -> int:
        return self.outcome.exit_code

    def to_dict(self) -> dict:
        out = {
            "operation": self.operation,
            "params": encode(self.params),
            "outcome": self.outcome.value,
            "horizon": self.horizon,
            "seed": self.seed,
        }
        if self.witness is not None:
            out["witness"] = encode(self.witness)
        if self.details:
            out["details"] = encode(self.details)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        # round-trips the encoded form; values stay in their encoded shape
        return cls(
            operation=data["operation"],
            outcome=Outcome(data["outcome"]),
            params=data.get("params", {}),
            witness=data.get("witness"),
            horizon=data.get("horizon"),
            seed=data.get("seed"),
            details=data.get("details", {}),
        )
