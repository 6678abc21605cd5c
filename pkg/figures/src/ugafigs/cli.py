"""Command line entry point: ``ugafigs LAYOUT INPUT... --out image.png``."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ugafigs",
        description="Render ugalab experiment CSVs as figures.",
    )
    parser.add_argument("layout", choices=["fig1", "fig2", "fig3", "refractal"])
    parser.add_argument("inputs", nargs="+",
                        help="aggregate CSV(s); fig2/fig3 take clamped then plain")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--cadence", type=int, default=1,
                        help="generations between error bars")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(tuple(args.inputs), args.layout, args.out, args.cadence)
    result = render(spec)
    print(
        f"wrote {result.output}: {result.panels} panel(s), "
        f"series {result.series_per_panel}, "
        f"{result.error_bars_per_series} error bars per series"
    )
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
