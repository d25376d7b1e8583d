"""Command-line entry: flags mirror FigureSpec."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from v2nplots.figures import DEFAULT_BIN_WIDTH_DB, FIGURE_KINDS, FigureSpec, SchemaError, render


def _parse(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="v2n-plots", description="Render figures from v2nsim CSV/JSON results"
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--input", required=True, help="result CSV (curves) or JSON (snr_pdf, snapshot)")
    parser.add_argument("--output", required=True, help="image file to write (png/svg/pdf)")
    parser.add_argument("--dump", default=None, help="also write the plotted arrays as JSON")
    parser.add_argument("--bin-width-db", type=float, default=DEFAULT_BIN_WIDTH_DB)
    parser.add_argument("--title", default=None)
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    parser.add_argument("--xlim", default=None, help="comma-separated, e.g. 0,200")
    parser.add_argument("--ylim", default=None)
    return parser.parse_args(argv)


def _limits(text: str | None) -> tuple[float, float] | None:
    if text is None:
        return None
    lo, hi = (float(v) for v in text.split(","))
    return lo, hi


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse(argv)
    spec = FigureSpec(
        kind=args.kind,
        input_path=args.input,
        output_path=args.output,
        dump_path=args.dump,
        bin_width_db=args.bin_width_db,
        title=args.title,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        xlim=_limits(args.xlim),
        ylim=_limits(args.ylim),
    )
    try:
        out = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
