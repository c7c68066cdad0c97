"""Command-line entry point: one figure per invocation."""

from __future__ import annotations

import argparse
import os
import sys

from .figspec import KINDS, FigureSpec
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monikit-plots",
        description="Render a figure from simulator CSV tables "
                    "(optionally overlaying a fit summary JSON).")
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="figure kind")
    parser.add_argument("--csv", action="append", required=True,
                        metavar="PATH", help="input table (repeatable)")
    parser.add_argument("--fit", metavar="PATH",
                        help="fit summary JSON to overlay")
    parser.add_argument("--out", metavar="PATH",
                        help="output image (.png/.svg/.pdf); default "
                             "<first csv>_<kind>.png")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out
    if out is None:
        base = os.path.splitext(args.csv[0])[0]
        out = f"{base}_{args.kind}.png"
    try:
        spec = FigureSpec(kind=args.kind, csv_paths=tuple(args.csv),
                          out_path=out, fit_path=args.fit)
        path = render(spec)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
