"""Command-line entry point.

    splitq run CONFIG.yaml [--out DIR] [--seed N] [--full-scale]
                           [--export-trajectories] [--jobs N]

Exit codes: 0 on success, 1 for unusable input (missing file, invalid
config, bad flag values), 2 for a failure while running the experiment.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, parse_config
from .experiment import run_experiment

__all__ = ["main", "build_parser", "FULL_SCALE"]

# Row counts the full-scale flag pins, regardless of what the config asks for.
FULL_SCALE = {
    "mdp-tournament": {"scenarios": 100, "runs": 20},
    "igt": {"runs": 200, "horizon": 500},
    "pacman": {"runs": 3, "episodes": 100},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitq",
        description="Run split-Q learning experiments from a YAML config.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config", help="path to the YAML experiment file")
    run.add_argument("--out", default=None, help="output directory (default: results/<config stem>)")
    run.add_argument("--seed", type=int, default=None, help="override the config's master seed")
    run.add_argument(
        "--full-scale",
        action="store_true",
        help="pin the run sizes to the reference protocol for this experiment kind",
    )
    run.add_argument(
        "--export-trajectories",
        action="store_true",
        help="also write per-run trajectory records",
    )
    run.add_argument("--jobs", type=int, default=1, help="worker processes for scenario fan-out")
    return parser


def _apply_flags(config, args):
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError([f"--seed must fit in an unsigned 64-bit int, got {args.seed}"])
        config = replace(config, seed=args.seed)
    if args.full_scale:
        config = replace(config, **FULL_SCALE[config.kind])
    if args.export_trajectories:
        config = replace(config, export_trajectories=True)
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "run":  # pragma: no cover - argparse enforces the choice
        parser.error(f"unknown command {args.command!r}")

    config_path = Path(args.config)
    if not config_path.is_file():
        print(f"error: config file not found: {config_path}", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print(f"error: --jobs must be >= 1, got {args.jobs}", file=sys.stderr)
        return 1
    try:
        config = parse_config(config_path)
        config = _apply_flags(config, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out_dir = Path(args.out) if args.out else Path("results") / config_path.stem
    try:
        outcome = run_experiment(config, out_dir, n_jobs=args.jobs)
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: experiment failed: {exc}", file=sys.stderr)
        return 2
    for name in sorted(outcome["files"]):
        print(f"wrote {Path(outcome['out_dir']) / name} ({outcome['files'][name]} rows)")
    print(f"wrote {Path(outcome['out_dir']) / 'manifest.json'}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
