"""Config-driven runs: INI schema, operation dispatch and report assembly."""
from __future__ import annotations

import configparser
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .. import __version__
from ..chaos_entropy import (
    dense_periodic_at_point,
    devaney_point_verdict,
    entropy_certificate_from_spec_points,
    entropy_estimate,
    probe_balls,
    sensitivity_constant_from_periodic,
    sensitivity_witness,
)
from ..errors import ConfigError
from ..exact import as_fraction
from ..expansivity import pointwise_expansivity_verdict
from ..shadowing_spec import (
    mixing_point_verdict,
    shadowable_point_verdict,
    specification_point_verdict,
    transitive_point_verdict,
)
from ..systems import system_from_section
from ..verdict import Verdict, dumps, encode

SCHEMA_VERSION = 1
REQUIRED = object()
EXIT_ERROR = 3


# -- value parsers --------------------------------------------------------------

def _rational(text):
    return as_fraction(text.strip())


def _rationals(text):
    return [as_fraction(t.strip()) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _region(text):
    text = text.strip()
    if not text:
        return None
    lo, hi = text.split(",")
    return (as_fraction(lo.strip()), as_fraction(hi.strip()))


POINT = "point"


@dataclass(frozen=True)
class Param:
    parse: object
    default: object = REQUIRED


def _probes(system, params, seed):
    return probe_balls(system, params["probes"], params["probe_radius"], seed)


def _op_expansivity(system, p, seed):
    _, v = pointwise_expansivity_verdict(system, p["x"], T=p["T"], budget=p["budget"], seed=seed)
    return v


def _op_shadowable(system, p, seed):
    return shadowable_point_verdict(system, p["x"], p["epsilon"], trials=p["trials"], length=p["length"], seed=seed)


def _op_specification(system, p, seed):
    return specification_point_verdict(system, p["x"], p["epsilon"], M_grid=tuple(p["m_grid"]), seed=seed,
                                       count=p["count"])


def _op_mixing(system, p, seed):
    return mixing_point_verdict(system, p["x"], p["radii"], _probes(system, p, seed), p["n_max"])


def _op_transitive(system, p, seed):
    return transitive_point_verdict(system, p["x"], p["radii"], _probes(system, p, seed), p["n_max"])


def _op_sensitivity(system, p, seed):
    return sensitivity_witness(system, p["x"], p["radii"], p["T"], p["budget"], seed)


def _op_sensitivity_periodic(system, p, seed):
    return sensitivity_constant_from_periodic(system, p["x"], p["q"], T=p["T"])


def _op_dense_periodic(system, p, seed):
    return dense_periodic_at_point(system, p["x"], p["radii"], p["period_bound"], seed=seed)


def _op_devaney(system, p, seed):
    return devaney_point_verdict(system, p["x"], p["radii"], _probes(system, p, seed), p["n_max"], p["T"],
                                 p["period_bound"], seed=seed)


def _op_entropy(system, p, seed):
    return entropy_estimate(system, p["region"], p["epsilons"], p["n_max"], p["mode"], p["count"], seed)


def _op_entropy_certificate(system, p, seed):
    return entropy_certificate_from_spec_points(system, p["x"], p["y"], p["epsilon"], p["M"], p["n"], seed)


_RADII = Param(_rationals, [Fraction(1, 4), Fraction(1, 16)])
_PROBES = {"probes": Param(int, 10), "probe_radius": Param(_rational, Fraction(1, 8)), "n_max": Param(int, 32)}

OPERATIONS = {
    "pointwise_expansivity": (_op_expansivity, {"x": Param(POINT), "T": Param(int, 8), "budget": Param(int, 256)}),
    "shadowable_point": (_op_shadowable, {"x": Param(POINT), "epsilon": Param(_rational), "trials": Param(int, 20),
                                          "length": Param(int, 16)}),
    "specification_point": (_op_specification, {"x": Param(POINT), "epsilon": Param(_rational),
                                                "m_grid": Param(_ints, [2, 4, 6, 8, 12, 16]),
                                                "count": Param(int, 8)}),
    "mixing_point": (_op_mixing, {"x": Param(POINT), "radii": _RADII, **_PROBES}),
    "transitive_point": (_op_transitive, {"x": Param(POINT), "radii": _RADII, **_PROBES}),
    "sensitivity": (_op_sensitivity, {"x": Param(POINT), "radii": _RADII, "T": Param(int, 64),
                                      "budget": Param(int, 64)}),
    "sensitivity_from_periodic": (_op_sensitivity_periodic, {"x": Param(POINT), "q": Param(POINT),
                                                             "T": Param(int, 64)}),
    "dense_periodic": (_op_dense_periodic, {"x": Param(POINT), "radii": _RADII, "period_bound": Param(int, 12)}),
    "devaney_point": (_op_devaney, {"x": Param(POINT), "radii": _RADII, "T": Param(int, 64),
                                    "period_bound": Param(int, 12), **_PROBES}),
    "entropy_estimate": (_op_entropy, {"region": Param(_region, None),
                                       "epsilons": Param(_rationals, [Fraction(1, 1 << k) for k in range(1, 9)]),
                                       "n_max": Param(int, 12), "mode": Param(str, "exact_maximum"),
                                       "count": Param(int, 4096)}),
    "entropy_certificate": (_op_entropy_certificate, {"x": Param(POINT), "y": Param(POINT),
                                                      "epsilon": Param(_rational), "M": Param(int),
                                                      "n": Param(int)}),
}

RUN_KEYS = {"schema", "operation", "seed"}
OUTPUT_KEYS = {"format", "path"}
SECTIONS = {"run", "system", "params", "output"}


@dataclass
class ExperimentConfig:
    system: object
    operation: str
    params: dict
    seed: int
    fmt: str
    path: str | None
    echo: dict


def load_config(path, seed: int | None = None, fmt: str | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (M vs m)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError("config", str(exc)) from None
    return config_from_parser(cp, seed, fmt)


def config_from_parser(cp: configparser.ConfigParser, seed: int | None = None,
                       fmt: str | None = None) -> ExperimentConfig:
    for section in cp.sections():
        if section not in SECTIONS:
            raise ConfigError(section, "unknown section")
    for section in ("run", "system"):
        if not cp.has_section(section):
            raise ConfigError(section, "missing section")
    run = dict(cp["run"])
    for key in run:
        if key not in RUN_KEYS:
            raise ConfigError(f"run.{key}", "unknown field")
    if run.get("schema") != str(SCHEMA_VERSION):
        raise ConfigError("run.schema", f"expected schema = {SCHEMA_VERSION}")
    op = run.get("operation", "").strip()
    if op not in OPERATIONS:
        raise ConfigError("run.operation", f"unknown operation {op!r}")
    try:
        run_seed = int(run.get("seed", "0"))
    except ValueError:
        raise ConfigError("run.seed", "expected an integer") from None
    if seed is not None:
        run_seed = seed
    if not 0 <= run_seed < 1 << 64:
        raise ConfigError("run.seed", "seed must be an unsigned 64-bit integer")
    system = system_from_section(dict(cp["system"]))
    raw = dict(cp["params"]) if cp.has_section("params") else {}
    schema = OPERATIONS[op][1]
    params = {}
    for key in raw:
        if key not in schema:
            raise ConfigError(f"params.{key}", f"not a parameter of {op}")
    for key, spec in schema.items():
        if key not in raw:
            if spec.default is REQUIRED:
                raise ConfigError(f"params.{key}", "missing required parameter")
            params[key] = spec.default
            continue
        try:
            params[key] = system.decode_point(raw[key].strip()) if spec.parse == POINT else spec.parse(raw[key])
            if spec.parse == POINT:
                system.check_point(params[key])
        except Exception as exc:
            raise ConfigError(f"params.{key}", f"cannot parse {raw[key]!r}: {exc}") from None
    out = dict(cp["output"]) if cp.has_section("output") else {}
    for key in out:
        if key not in OUTPUT_KEYS:
            raise ConfigError(f"output.{key}", "unknown field")
    out_fmt = fmt or out.get("format", "json")
    if out_fmt not in ("json", "csv"):
        raise ConfigError("output.format", "expected json or csv")
    echo = {s: dict(cp[s]) for s in cp.sections()}
    echo["run"]["seed"] = str(run_seed)
    return ExperimentConfig(system, op, params, run_seed, out_fmt, out.get("path"), echo)


def _exact_flag(system) -> bool:
    return bool(system.caps.exact_symbolic or system.caps.exact_interval_image)


def result_payload(cfg: ExperimentConfig):
    """(payload dict, exit code, extra certificate record or None)."""
    func = OPERATIONS[cfg.operation][0]
    result = func(cfg.system, cfg.params, cfg.seed)
    record = None
    if isinstance(result, Verdict):
        payload = result.to_dict()
        code = result.exit_code
        exact = _exact_flag(cfg.system)
        record = _certificate_record(cfg, result)
    else:
        payload = result.to_dict()
        code = 0
        exact = bool(getattr(result, "exact", _exact_flag(cfg.system)))
        if payload.get("kind") == "entropy_certificate":
            record = payload
    payload = {"result": encode(payload), "exact": exact}
    return payload, code, record


def _certificate_record(cfg: ExperimentConfig, v: Verdict):
    w = v.witness
    if not v.fails or not isinstance(w, dict):
        return None
    cert = w.get("certificate")
    if not isinstance(cert, dict):
        return None
    if cert.get("kind") == "empty_feasible_set" and "request" in w:
        return {"kind": "infeasible_request", "system": encode(cfg.system.descriptor()), "request": w["request"],
                "certificate": encode(cert)}
    return None


def run(cfg: ExperimentConfig, out_dir: str | None = None) -> tuple[dict, int]:
    t0 = time.perf_counter()
    payload, code, record = result_payload(cfg)
    report = {
        "tool": "pointdyn",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "config": cfg.echo,
        "payload": payload,
        "exit_code": code,
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    target = out_dir or cfg.path
    if target:
        d = Path(target)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        if cfg.fmt == "csv":
            (d / "result.csv").write_text(to_csv(payload))
        else:
            (d / "result.json").write_text(dumps(payload) + "\n")
        if record is not None:
            (d / "certificate.json").write_text(dumps(record) + "\n")
    return report, code


def to_csv(payload: dict) -> str:
    res = payload["result"]
    if "rows" in res:
        lines = ["epsilon,n,s_n,rate"] + [f"{r['epsilon']},{r['n']},{r['s_n']},{r['rate']!r}" for r in res["rows"]]
    elif "operation" in res:
        lines = ["operation,outcome,horizon,seed", f"{res['operation']},{res['outcome']},{res['horizon']},{res['seed']}"]
    else:
        lines = ["key,value"] + [f"{k},{json.dumps(v, sort_keys=True)}" for k, v in sorted(res.items())
                                 if not isinstance(v, (list, dict))]
    return "\n".join(lines) + "\n"

