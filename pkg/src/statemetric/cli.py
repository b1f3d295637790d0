"""Command-line entry point: ``statemetric {distance,matrix,verify,report} SCENARIO``.

Exit status: 0 when every verdict passes (and every distance converged), 1 when
something failed, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConstructionError, InputError, KernelError
from .report import export, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="statemetric",
                                description="Metrics on state spaces from group actions and Dirac operators.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario file (TOML)")
    common.add_argument("--tolerance", type=float, help="gap hi - lo at which a distance is accepted")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--max-iters", type=int, dest="max_iters", help="cutting-plane iteration budget")
    common.add_argument("--out", help="output file (default: stdout, or the scenario's [output] paths)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    d = sub.add_parser("distance", parents=[common], help="distance between two states")
    d.add_argument("--pair", type=int, nargs=2, default=(0, 1), metavar=("I", "J"),
                   help="indices of the two states (default: 0 1)")
    sub.add_parser("matrix", parents=[common], help="all pairwise distances")
    sub.add_parser("verify", parents=[common], help="run the verification suite on the instance")
    sub.add_parser("report", parents=[common], help="run the scenario as configured and write its outputs")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.tolerance is not None and not args.tolerance > 0:
            raise InputError("--tolerance must be positive")
        if args.max_iters is not None and args.max_iters < 1:
            raise InputError("--max-iters must be positive")
        if args.seed is not None and args.seed < 0:
            raise InputError("--seed must be nonnegative")
        mode = {"distance": "distance", "matrix": "matrix", "verify": "verify", "report": "matrix"}[args.command]
        report = run_scenario(args.scenario, seed=args.seed, tolerance=args.tolerance,
                              max_iterations=args.max_iters, mode=mode,
                              pair=getattr(args, "pair", (0, 1)))
        if args.format == "csv" and mode == "verify":
            raise InputError("verify reports have no distance matrix; use --format json")
    except (InputError, ConstructionError, KernelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        if args.out:
            export(report, args.format, args.out)
        elif args.command == "report" and report.data["scenario"].get("output"):
            base = Path(args.scenario).parent
            for fmt, path in sorted(report.data["scenario"]["output"].items()):
                export(report, fmt, base / path)
        else:
            sys.stdout.write(export(report, args.format))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
