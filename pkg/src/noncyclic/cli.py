"""Command-line entry point.

    noncyclic --scenario run.json [--out FILE] [--format csv|json] [--seed N] [--jobs K]
    noncyclic --scenario ab-sweep                  # a registered name runs with defaults
    noncyclic ab-sweep --eta 0.3 --steps 401
    noncyclic spin-experiment --theta0 1.5708 --path octant --omega-b 1 --t 400 --shots 10000

Exit codes: 0 ok, 2 schema, 3 undefined phase, 4 degeneracy, 5 antipodal
endpoints, 6 insufficient resolution, 1 anything else.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import NoncyclicError
from .scenarios import RUNNERS, Scenario, load_scenario, render, run_scenario, sweep


def _output_flags(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--out", default=d, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=d, help="output format")
    parser.add_argument("--seed", type=int, default=d, help="seed for shot noise")
    parser.add_argument("--jobs", type=int, default=d, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncyclic", description="Noncyclic geometric phase scenarios.")
    parser.add_argument("--scenario", help="scenario JSON file, or the name of a registered scenario")
    parser.add_argument("--sweep-axis", help="config key to sweep")
    parser.add_argument("--sweep-values", help="comma-separated values for --sweep-axis")
    _output_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command")

    ab = sub.add_parser("ab-sweep", help="flux-threaded box phase versus box position")
    ab.add_argument("--eta", type=float, default=0.3)
    ab.add_argument("--delta-theta", type=float, default=1.5 * np.pi)
    ab.add_argument("--mode", type=int, default=1)
    ab.add_argument("--steps", type=int, default=401)
    _output_flags(ab, suppress=True)

    sp = sub.add_parser("spin-experiment", help="spin polarization under a dragged field")
    sp.add_argument("--theta0", type=float, default=None)
    sp.add_argument("--path", default="octant", help="path file, or 'octant' / 'equator-quarter'")
    sp.add_argument("--omega-b", type=float, default=1.0)
    sp.add_argument("--t", type=float, default=400.0)
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--no-oracle", action="store_true")
    sp.add_argument("--verbose", action="store_true", help="also emit the alternative-sign form")
    _output_flags(sp, suppress=True)
    return parser


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _scenario_from_args(args) -> Scenario:
    if args.command == "ab-sweep":
        cfg = {"eta": args.eta, "delta_theta": args.delta_theta, "mode": args.mode, "steps": args.steps}
        return Scenario("ab-sweep", cfg)
    if args.command == "spin-experiment":
        cfg = {"theta0": args.theta0, "path": args.path, "omega_B": args.omega_b, "t": args.t,
               "shots": args.shots, "dt": args.dt, "oracle": not args.no_oracle, "verbose": args.verbose}
        return Scenario("spin-experiment", cfg, format="json")
    if args.scenario is None:
        raise SystemExit("noncyclic: give --scenario or a subcommand")
    if args.scenario in RUNNERS and not os.path.exists(args.scenario):
        return Scenario(args.scenario)
    return load_scenario(args.scenario)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = _scenario_from_args(args)
        if getattr(args, "seed", None) is not None:
            scenario.seed = args.seed
        fmt = getattr(args, "format", None) or scenario.format
        out = getattr(args, "out", None) or scenario.output
        jobs = getattr(args, "jobs", None) or 1
        if args.sweep_axis is not None:
            values = [] if not args.sweep_values else [_parse_value(v) for v in args.sweep_values.split(",")]
            table = sweep(scenario, args.sweep_axis, values, jobs=jobs)
        elif scenario.sweep is not None:
            table = sweep(scenario, scenario.sweep["axis"], scenario.sweep["values"], jobs=jobs)
        else:
            table = run_scenario(scenario)
        text = render(table, fmt)
    except NoncyclicError as exc:
        print(f"noncyclic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - report and fail, never traceback at the user
        print(f"noncyclic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
