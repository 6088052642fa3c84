"""Command-line entry point: plotgen --kind {pareto|scaling|violins} --in ... --out ..."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .figures import ColumnError, plot_pareto, plot_scaling, plot_violins


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen", description="Render figures from rheakit CSV outputs"
    )
    parser.add_argument("--kind", required=True, choices=("pareto", "scaling", "violins"))
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        metavar="PATH[,PATH]",
        help="input CSV path(s); pareto accepts 'fronts.csv[,optimal.csv]'",
    )
    parser.add_argument("--out", required=True, metavar="PATH", help="output image (.png or .svg)")
    parser.add_argument("--group", default="id", help="group column for violins")
    parser.add_argument("--title", default=None, help="figure title override")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    paths = [p for p in args.inputs.split(",") if p]
    try:
        if args.kind == "pareto":
            optional = {"title": args.title} if args.title else {}
            plot_pareto(paths[0], args.out, paths[1] if len(paths) > 1 else None, **optional)
        elif args.kind == "scaling":
            optional = {"title": args.title} if args.title else {}
            plot_scaling(paths[0], args.out, **optional)
        else:
            optional = {"title": args.title} if args.title else {}
            plot_violins(paths[0], args.out, group_column=args.group, **optional)
    except (ColumnError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
