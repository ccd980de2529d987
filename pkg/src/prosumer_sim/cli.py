"""Command-line entry point: ``simulate`` and ``validate``."""

from __future__ import annotations

import argparse
import logging
import sys

from .runner import ConfigError, ScenarioError, expand_matrix, load_config, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prosumer-sim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the scenario sweep and write CSV reports")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", default=None, help="output directory (overrides the config)")
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--trace-year", type=int, default=None)

    val = sub.add_parser("validate", help="check the config and every profile without simulating")
    val.add_argument("--config", required=True)

    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            n = len(expand_matrix(cfg))
            print(f"config OK: {n} scenarios")
            return EXIT_OK
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        reports = run_sweep(cfg, out_dir=args.out, jobs=args.jobs, trace_year=args.trace_year)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScenarioError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"{len(reports)} scenarios written")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
