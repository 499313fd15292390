"""Command-line interface.

``trackplace place <trace> [options]`` runs the placement matrix over a
trace file and writes a CSV or JSON report.  Exit codes: 0 on success, 1 on
usage errors, 2 on trace parse errors, 3 when an internal cross-check fails.
"""

from __future__ import annotations

import argparse
import os
import sys

from .core import DbcConfig
from .errors import (
    CapacityError,
    DomainError,
    InvariantViolation,
    TraceParseError,
    UsageError,
)
from .harness import (
    ALGORITHMS,
    EnergyModel,
    RunConfig,
    emit_report,
    parse_traces,
    run_matrix,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as exceptions."""

    def error(self, message):  # noqa: A003 - argparse API
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="trackplace",
                     description="Shift-minimizing placement for racetrack memory.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    place = sub.add_parser("place", help="run placement algorithms over a trace file",
                           description="Run placement algorithms over a trace file "
                                       "and emit a report.")
    place.add_argument("file", help="trace file of access sequences")
    place.add_argument("--algos", default="ofu,mwpc,chen,chen_tb,shifts_reduce",
                       help="comma-separated algorithms to run "
                            f"(known: {','.join(ALGORITHMS)})")
    place.add_argument("--out", default=None,
                       help="output path (default: stdout)")
    place.add_argument("--format", default="csv", choices=("csv", "json"),
                       help="report format")
    place.add_argument("--seed", type=int, default=0,
                       help="random seed for the genetic algorithm")
    place.add_argument("--dbc-n", type=int, default=None, metavar="N",
                       help="domains per track; sequences with more variables "
                            "are flagged")
    place.add_argument("--bits", type=int, default=32, metavar="M",
                       help="bits per data item, used by the energy model")
    place.add_argument("--ilp-export", default=None, metavar="DIR",
                       help="directory to export per-sequence LP files into")
    place.add_argument("--ilp-budget", type=float, default=10800.0, metavar="SECS",
                       help="time budget handed to the external MILP solver")
    place.add_argument("--bnb-budget", type=float, default=10.0, metavar="SECS",
                       help="time budget of the branch-and-bound search")
    place.add_argument("--no-timing", action="store_true",
                       help="report zero runtimes so repeated runs are "
                            "byte-identical")
    return parser


def _cmd_place(args: argparse.Namespace) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    if not algos:
        print("trackplace: no algorithms requested", file=sys.stderr)
        return EXIT_USAGE

    try:
        dbc = None if args.dbc_n is None else DbcConfig(args.dbc_n, args.bits)
        cfg = RunConfig(
            seed=args.seed,
            dbc=dbc,
            energy=EnergyModel(bits_per_item=args.bits),
            bnb_budget=args.bnb_budget,
            ilp_export_dir=args.ilp_export,
            ilp_budget=args.ilp_budget,
            solver_command=os.environ.get("TRACKPLACE_SOLVER"),
            measure_time=not args.no_timing,
        )
    except DomainError as exc:
        print(f"trackplace: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        traces = parse_traces(args.file)
    except TraceParseError as exc:
        print(f"trackplace: {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"trackplace: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        report = run_matrix(traces, algos, cfg)
    except (UsageError, CapacityError) as exc:
        print(f"trackplace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"trackplace: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT

    try:
        if args.out is None:
            emit_report(report, sys.stdout, args.format)
        else:
            emit_report(report, args.out, args.format)
    except OSError as exc:
        print(f"trackplace: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"trackplace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    if args.command == "place":
        return _cmd_place(args)
    print(f"trackplace: unknown command {args.command!r}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
