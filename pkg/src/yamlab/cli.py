"""Command-line entry point: ``yamlab <scenario> [options]``."""

from __future__ import annotations

import argparse
import sys

from .errors import YamlabError
from .harness import SCENARIOS, ConfigError, ScenarioConfig, emit_csv, format_report, load_config, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yamlab",
        description="Run a Yamabe-constant scenario and report pass/fail per case.",
    )
    parser.add_argument("scenario", help=f"one of: {', '.join(SCENARIOS)}")
    parser.add_argument("--config", metavar="FILE", help="key = value parameter file")
    parser.add_argument("--out", metavar="FILE.csv", help="write the report as CSV")
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    parser.add_argument("--res", type=int, default=None, help="override the scenario resolution")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.config:
            cfg = load_config(args.config, args.scenario)
        else:
            cfg = ScenarioConfig(args.scenario)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.res is not None:
            cfg.resolution = args.res
        if args.out is not None:
            cfg.out = args.out
        if cfg.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {cfg.scenario!r}; choose from {', '.join(SCENARIOS)}")
        report = run_scenario(cfg)
    except OSError as exc:
        print(f"yamlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (YamlabError, ValueError) as exc:
        print(f"yamlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(format_report(report))
    if cfg.out:
        try:
            emit_csv(report, cfg.out)
        except OSError as exc:
            print(f"yamlab: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
