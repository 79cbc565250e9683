"""Command line interface.

entcheck analyze --input state.txt [--format dense|sparse] [--method ...]
entcheck gen --product|--random --dims 2,2 [--seed N]

Exit codes: 0 = factorized, 1 = entangled, 2 = error (including parse
failures, criterion/oracle disagreement, and a forced method that stays
inconclusive).  ENTCHECK_TOL_MAG overrides the default magnitude
tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io as state_io
from .core import Tolerances
from .oracle import gen_product_state, gen_random_state
from .pipeline import METHODS, analyze, render_report


def _default_tol_mag():
    value = os.environ.get("ENTCHECK_TOL_MAG")
    if value is None:
        return Tolerances.eps_mag
    try:
        return float(value)
    except ValueError:
        raise SystemExit(f"ENTCHECK_TOL_MAG is not a number: {value!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entcheck",
        description="Decide whether a tensor-product state vector is "
        "factorized or entangled from its expansion coefficients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="analyze a state file")
    an.add_argument("--input", required=True, help="path to the state file")
    an.add_argument("--format", choices=state_io.FORMATS, default="dense")
    an.add_argument(
        "--method",
        choices=METHODS,
        default="auto",
        help="force one criterion instead of auto-escalating",
    )
    an.add_argument("--tol-mag", type=float, default=None, metavar="X")
    an.add_argument("--tol-ang", type=float, default=None, metavar="X")
    an.add_argument("--tol-rank", type=float, default=None, metavar="X")
    an.add_argument(
        "--no-oracle-check",
        action="store_true",
        help="skip the rank-oracle cross-check of conclusive verdicts",
    )
    an.add_argument("--pretty", action="store_true", help="append a human-readable table")

    gen = sub.add_parser("gen", help="generate a random state file")
    kind = gen.add_mutually_exclusive_group(required=True)
    kind.add_argument("--product", action="store_true", help="product state")
    kind.add_argument("--random", action="store_true", help="i.i.d. random state")
    gen.add_argument("--dims", required=True, help="comma-separated dimensions, e.g. 2,2,2")
    gen.add_argument("--seed", type=int, default=0, metavar="N")
    gen.add_argument(
        "--zero-avoidance",
        action="store_true",
        help="product states only: keep factor entries away from zero",
    )
    gen.add_argument("--out-format", choices=state_io.FORMATS, default="dense")
    gen.add_argument("--output", default=None, help="write to a file instead of stdout")
    return parser


def _cmd_analyze(args) -> int:
    tol = Tolerances(
        eps_mag=args.tol_mag if args.tol_mag is not None else _default_tol_mag(),
        eps_ang=args.tol_ang if args.tol_ang is not None else Tolerances.eps_ang,
        eps_rank=args.tol_rank if args.tol_rank is not None else Tolerances.eps_rank,
    )
    try:
        tensor = state_io.load_state(args.input, args.format)
    except (OSError, ValueError) as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    report = analyze(
        tensor, tol, method=args.method, oracle_check=not args.no_oracle_check
    )
    sys.stdout.write(render_report(report, pretty=args.pretty))
    return report.exit_code


def _cmd_gen(args) -> int:
    try:
        dims = tuple(int(tok) for tok in args.dims.replace(" ", "").split(","))
    except ValueError:
        print(f"error: bad --dims {args.dims!r}", file=sys.stderr)
        return 2
    if len(dims) < 2 or any(d < 1 for d in dims):
        print(f"error: dims must be >= 2 positive integers, got {dims}", file=sys.stderr)
        return 2
    if args.product:
        tensor = gen_product_state(dims, args.seed, zero_avoidance=args.zero_avoidance)
    else:
        tensor = gen_random_state(dims, args.seed)
    text = state_io.dumps(tensor, args.out_format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return _cmd_analyze(args)
    return _cmd_gen(args)


if __name__ == "__main__":
    sys.exit(main())
