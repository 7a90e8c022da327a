"""Command-line entry points, one per figure kind."""

import argparse
import sys

from .figures import PlotSpec, render
from .io import SchemaError

__all__ = ["curves_main", "bars_main", "heatmap_main"]


def _run(spec: PlotSpec) -> int:
    """Render, reporting bad input as an error line rather than a traceback."""
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _parser(kind: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=f"plotkit-{kind}", description=description)
    parser.add_argument("input", help="experiment CSV file to render")
    parser.add_argument("output", help="image file to write")
    return parser


def curves_main(argv=None) -> int:
    parser = _parser("curves", "Learning curves with standard-error bands, one per agent.")
    parser.add_argument(
        "--smoothing", type=int, default=1, metavar="W",
        help="centered moving-average window for display (default: no smoothing)",
    )
    args = parser.parse_args(argv)
    return _run(PlotSpec(inputs=(args.input,), kind="curves", output=args.output, smoothing=args.smoothing))


def bars_main(argv=None) -> int:
    parser = _parser("bars", "Final-score bars with standard-error whiskers, one panel per mode.")
    args = parser.parse_args(argv)
    return _run(PlotSpec(inputs=(args.input,), kind="bars", output=args.output))


def heatmap_main(argv=None) -> int:
    parser = _parser("heatmap", "Pairwise win-rate heatmap of a tournament matrix file.")
    args = parser.parse_args(argv)
    return _run(PlotSpec(inputs=(args.input,), kind="heatmap", output=args.output))
