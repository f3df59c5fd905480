"""Command-line workbench: ``pointdyn run|verify-certificate|suite|systems``.

Exit codes: 0 holds/success, 1 fails with witness, 2 inconclusive, 3 error.
"""
from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError, DynamicsError
from ..systems.config import SYSTEM_KEYS
from .runner import EXIT_ERROR, OPERATIONS, load_config, run
from .suites import ALIASES, SUITES, run_suite
from .verify import CertificateShapeError, verify_file


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pointdyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one configured operation")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=_u64)
    r.add_argument("--out")
    r.add_argument("--format", choices=("json", "csv"))

    v = sub.add_parser("verify-certificate", help="re-check a certificate record")
    v.add_argument("path")

    s = sub.add_parser("suite", help="run a canned battery")
    s.add_argument("name", choices=SUITES + tuple(ALIASES))
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")

    sy = sub.add_parser("systems", help="system catalogue")
    sy.add_argument("action", choices=("list",))

    ops = sub.add_parser("operations", help="operations accepted by run, with their parameters")
    ops.add_argument("action", choices=("list",))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config, args.seed, args.format)
            report, code = run(cfg, args.out)
            print(json.dumps(report["payload"], sort_keys=True))
            return code
        if args.command == "verify-certificate":
            problems = verify_file(args.path)
            for line in problems:
                print(line)
            print("certificate OK" if not problems else f"{len(problems)} re-check failure(s)")
            return 0 if not problems else 1
        if args.command == "suite":
            rows, table = run_suite(args.name, args.seed, args.out, args.format)
            sys.stdout.write(table)
            return 0 if all(r.ok for r in rows) else 1
        if args.command == "systems":
            for sid, (keys, summary) in SYSTEM_KEYS.items():
                print(f"{sid:26s} {summary}  [keys: {', '.join(sorted(keys)) or '-'}]")
            return 0
        if args.command == "operations":
            for op, (_, schema) in OPERATIONS.items():
                print(f"{op:26s} {', '.join(schema)}")
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CertificateShapeError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except DynamicsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
