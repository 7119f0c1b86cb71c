"""Command line entry points: simulate, validate, version."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from ._version import __version__
from .config import load_config
from .exceptions import ConfigError
from .runner import run_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwv2v",
        description=(
            "Monte Carlo simulator of mmWave vehicle-to-vehicle links on a "
            "multi-lane highway: SINR outage and rate coverage curves."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the configured parameter sweep")
    sim.add_argument("--config", required=True, help="YAML scenario file")
    sim.add_argument("--out", help="output directory (overrides run.output_dir)")
    sim.add_argument("--seed", type=int, help="override run.master_seed")
    sim.add_argument("--snapshots", type=int, help="override run.num_snapshots")
    sim.add_argument("--workers", type=int, default=1, help="parallel sweep-point workers")

    val = sub.add_parser("validate", help="check a scenario file and exit")
    val.add_argument("--config", required=True, help="YAML scenario file")

    sub.add_parser("version", help="print the package version")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "version":
        print(__version__)
        return 0

    try:
        config = load_config(args.config)
    except FileNotFoundError:
        print(f"config file not found: {args.config}", file=sys.stderr)
        return 2
    except ConfigError as err:
        print("invalid config:", file=sys.stderr)
        for msg in err.errors:
            print(f"  - {msg}", file=sys.stderr)
        return 2

    if args.command == "validate":
        points = config.sweep_points()
        print(f"config ok: {len(points)} sweep point(s), {config.num_snapshots} snapshots each")
        return 0

    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.snapshots is not None:
        overrides["num_snapshots"] = args.snapshots
    if overrides:
        config = dataclasses.replace(config, **overrides)

    try:
        manifest = run_sweep(config, output_dir=args.out, workers=args.workers, echo=print)
    except ConfigError as err:
        for msg in err.errors:
            print(msg, file=sys.stderr)
        return 2
    except OSError as err:
        print(f"output directory not usable: {err}", file=sys.stderr)
        return 2

    print(f"wrote {manifest.files['rc_curve']}")
    print(f"wrote {manifest.files['pt_curve']}")
    print(f"wrote {manifest.files['summary']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
