"""Command line: render one figure kind from a sweep CSV."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .figures import (FIGURE_KINDS, EmptySelectionError, FigureSpec,
                      SchemaError, render)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="coexplot",
        description="Render figures from simulator sweep CSV output "
                    "(SVG or PNG chosen by the output extension).")
    parser.add_argument("--csv", required=True, help="sweep CSV path")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        info = render(FigureSpec(csv_path=args.csv, kind=args.kind,
                                 out_path=args.out))
    except (SchemaError, EmptySelectionError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {info.out_path} ({info.series_count} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
