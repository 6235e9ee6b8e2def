"""Command-line renderer for run outputs: waterfall, gradient overlay, and
sweep-trend figures. Exit 0 on success, 1 on schema or input errors (the
offending column is named)."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureKind, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlb-plot", description="render figures from nlb output files")
    sub = parser.add_subparsers(dest="command", required=True)

    p_w = sub.add_parser("waterfall", help="overlay dumped field snapshots")
    p_w.add_argument("--fields", required=True, help="fields.csv from --dump-fields")
    p_w.add_argument("--report", help="report.json (labels x with the domain length)")
    p_w.add_argument("--stride", type=int, default=1,
                     help="plot every this-many-th snapshot")
    p_w.add_argument("--out", default="waterfall.png")

    p_o = sub.add_parser("overlay", help="probe gradient vs oracle curve")
    p_o.add_argument("--record", required=True, help="record.csv of the run")
    p_o.add_argument("--oracle", required=True, help="oracle CSV (t,F1,F2)")
    p_o.add_argument("--probe-index", dest="probe_index", type=int, default=0)
    p_o.add_argument("--out", default="overlay.png")

    p_s = sub.add_parser("sweep-trend", help="blow-up location vs shift")
    p_s.add_argument("--summary", required=True, help="sweep summary.csv")
    p_s.add_argument("--period", type=float,
                     help="domain length for folding locations to origin distance")
    p_s.add_argument("--out", default="sweep_trend.png")

    args = parser.parse_args(argv)
    try:
        if args.command == "waterfall":
            spec = FigureSpec(FigureKind.WATERFALL,
                              {"fields": args.fields, "report": args.report},
                              args.out, snapshot_stride=args.stride)
        elif args.command == "overlay":
            spec = FigureSpec(FigureKind.GRADIENT_OVERLAY,
                              {"record": args.record, "oracle": args.oracle},
                              args.out, probe_index=args.probe_index)
        else:
            spec = FigureSpec(FigureKind.SWEEP_TREND, {"summary": args.summary},
                              args.out, period=args.period)
        out = render(spec)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
