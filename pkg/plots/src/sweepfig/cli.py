"""Command-line entry point: render one figure from a CSV file."""
from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, SchemaError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sweepfig",
        description="Render a figure from a cpsim sweep/compare/reserve CSV.")
    parser.add_argument("--csv", required=True, help="input CSV file")
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="figure kind to render")
    parser.add_argument("--output", required=True,
                        help="output image path (.svg, .png, or .pdf)")
    args = parser.parse_args(argv)
    try:
        out = render(FigureSpec(args.csv, args.kind, args.output))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
