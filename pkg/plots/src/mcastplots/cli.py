"""Command-line chart rendering: `mcastplots KIND --in GLOB --out PATH`."""

import argparse
import sys

from .charts import CHART_KINDS, ChartSpec, SchemaError, expand_inputs, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcastplots",
        description="Render charts from mcastpower trace/sweep CSV files",
    )
    parser.add_argument("kind", choices=CHART_KINDS)
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True,
        help="input CSV path or glob (repeatable)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--smooth", type=int, default=1000,
                        help="smoothing window for the comparison chart")
    parser.add_argument("--constraint", type=float, default=None,
                        help="draw the average-power constraint line (W)")
    parser.add_argument("--marker", type=float, action="append", default=[],
                        help="vertical marker time in seconds (repeatable)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = ChartSpec(
            kind=args.kind,
            inputs=expand_inputs(args.inputs),
            output=args.out,
            smoothing=args.smooth,
            constraint=args.constraint,
            markers=args.marker,
        )
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(spec.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
