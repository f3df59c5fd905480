"""Build systems from a key-value descriptor (the ``[system]`` config section)."""
from __future__ import annotations

from ..errors import ConfigError
from ..exact import as_fraction
from .fixtures import AccumulatingSequenceSpace, OrbitCloudSystem
from .scalar import DoublingCircle, DoublingRay, IdentityInterval, SquaringMap, TentMap
from .symbolic import FullShift, OneSidedShift, SymSeq

# id -> (allowed keys, summary)
SYSTEM_KEYS = {
    "full_shift": ({"alphabet_size"}, "two-sided full shift, d(x,y) = 2^-min{|n| : x_n != y_n}"),
    "one_sided_shift": ({"alphabet_size"}, "one-sided full shift"),
    "doubling_ray": ({"window"}, "f(x) = 2x on [0, inf), sampling window [0, W]"),
    "squaring": (set(), "f(x) = x^2 on [0, 1]"),
    "doubling_circle": (set(), "x -> 2x mod 1 on R/Z"),
    "tent": (set(), "tent map on [0, 1]"),
    "identity_interval": (set(), "identity on [0, 1]"),
    "orbit_cloud": ({"alphabet_size", "periodic_word", "levels"}, "full shift with a rotating cloud of tagged points"),
    "accumulating_space": (set(), "identity on {tanh i} u {1, -1}"),
    "accumulating_space_open": (set(), "identity on {tanh i}"),
}


def _int(section: str, key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{section}.{key}", f"expected an integer, got {text!r}") from None


def make_system(system_id: str, **options):
    """Construct a system by id with already-typed options."""
    if system_id == "full_shift":
        return FullShift(options.get("alphabet_size", 2))
    if system_id == "one_sided_shift":
        return OneSidedShift(options.get("alphabet_size", 2))
    if system_id == "doubling_ray":
        return DoublingRay(options.get("window", 2 ** 20))
    if system_id == "orbit_cloud":
        word = tuple(options.get("periodic_word", (0, 1)))
        base = FullShift(options.get("alphabet_size", 2))
        return OrbitCloudSystem(base, SymSeq.periodic(word), len(word), options.get("levels", 64))
    if system_id == "accumulating_space":
        return AccumulatingSequenceSpace(include_limits=True)
    if system_id == "accumulating_space_open":
        return AccumulatingSequenceSpace(include_limits=False)
    simple = {
        "squaring": SquaringMap,
        "doubling_circle": DoublingCircle,
        "tent": TentMap,
        "identity_interval": IdentityInterval,
    }
    if system_id in simple:
        return simple[system_id]()
    raise ConfigError("system.id", f"unknown system {system_id!r}")


def system_from_section(section: dict, name: str = "system"):
    """Validate a raw string mapping and build the system it describes.

    Unknown keys are errors; the error carries the offending field path.
    """
    if "id" not in section:
        raise ConfigError(f"{name}.id", "missing system id")
    system_id = section["id"].strip()
    if system_id not in SYSTEM_KEYS:
        raise ConfigError(f"{name}.id", f"unknown system {system_id!r}")
    allowed = SYSTEM_KEYS[system_id][0]
    options = {}
    for key, text in section.items():
        if key == "id":
            continue
        if key not in allowed:
            raise ConfigError(f"{name}.{key}", f"not a field of {system_id}")
        if key in ("alphabet_size", "levels"):
            options[key] = _int(name, key, text)
        elif key == "window":
            try:
                options[key] = as_fraction(text)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{name}.{key}", f"expected a rational, got {text!r}") from None
        elif key == "periodic_word":
            if not text.strip().isdigit():
                raise ConfigError(f"{name}.{key}", "expected a word of digits")
            options[key] = tuple(int(c) for c in text.strip())
    try:
        return make_system(system_id, **options)
    except ConfigError:
        raise
    except Exception as exc:  # constructor preconditions
        raise ConfigError(name, str(exc)) from exc


def system_from_descriptor(desc: dict):
    """Inverse of ``System.descriptor()`` (used to re-check certificates)."""
    system_id = desc.get("id")
    if system_id == "orbit_cloud":
        base = system_from_descriptor(desc["base"])
        p = base.decode_point(desc["p"])
        return OrbitCloudSystem(base, p, int(desc["t"]), int(desc.get("levels", 64)))
    options = {}
    if "alphabet_size" in desc:
        options["alphabet_size"] = int(desc["alphabet_size"])
    if "window" in desc:
        options["window"] = as_fraction(desc["window"])
    return make_system(system_id, **options)
