"""Command line front end.

Exit codes: 0 all invariants passed, 1 an invariant failed (failing
case ids go to stderr), 2 configuration problem, 3 I/O problem.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .cache import cache_lookup, cache_store
from .config import EXPERIMENT_KINDS, ConfigError, default_config, parse_config
from .reporting import format_report, load_report, write_report
from .runner import RunReport, run_experiment

__all__ = ["main", "build_parser"]

FERMION_KINDS = tuple(k for k in EXPERIMENT_KINDS if k != "findim-suite")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropylab",
        description="Run relative-entropy property suites and lattice experiments.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def run_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", type=Path, help="experiment config file")
        sub.add_argument("--out", type=Path, help="directory for report artifacts")
        sub.add_argument(
            "--no-cache", action="store_true", help="recompute even if cached"
        )
        sub.add_argument("--seed", type=int, help="override the config seed")
        sub.add_argument(
            "--jobs", type=int, default=1, help="worker threads for case sweeps"
        )

    findim = commands.add_parser(
        "findim-suite", help="finite-dimensional identity and index battery"
    )
    run_flags(findim)

    fermion = commands.add_parser(
        "fermion", help="free-fermion chain experiments"
    )
    fermion.add_argument("kind", choices=FERMION_KINDS, help="experiment kind")
    run_flags(fermion)

    report = commands.add_parser(
        "report", help="render a stored summary.json as text"
    )
    report.add_argument("summary", type=Path, help="path to a summary.json")
    return parser


def _resolve_config(args: argparse.Namespace, kind: str):
    if args.config is not None:
        config = parse_config(args.config, kind=kind)
    elif kind == "findim-suite":
        config = default_config(kind, seed=args.seed if args.seed is not None else 0)
    else:
        raise ConfigError(f"experiment '{kind}' requires --config")
    overrides = {}
    if args.seed is not None and args.seed != config.seed:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = str(args.out)
    if args.no_cache:
        overrides["cache_enabled"] = False
    if overrides:
        config = replace(config, **overrides)
    return config


def _finish(report: RunReport) -> int:
    print(format_report(report))
    if report.passed:
        return 0
    failing = report.failing_case_ids()
    print("failing cases: " + " ".join(failing), file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            return _finish(load_report(args.summary))

        kind = args.kind if args.command == "fermion" else "findim-suite"
        config = _resolve_config(args, kind)

        report = cache_lookup(config) if config.cache_enabled else None
        if report is None:
            report = run_experiment(config, jobs=max(1, args.jobs))
            if config.cache_enabled:
                cache_store(report)

        if config.out_dir:
            write_report(report, Path(config.out_dir))
        return _finish(report)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
