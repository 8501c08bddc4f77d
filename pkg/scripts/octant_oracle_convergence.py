"""Adiabatic octant phase against the propagated one as the drive slows down."""
import argparse
import sys

import numpy as np

from noncyclic.scenarios import render, run_oracle_convergence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target-metric", type=float, default=0.03)
    ap.add_argument("--multipliers", type=float, nargs="+", default=[1, 2, 4, 8, 16])
    ap.add_argument("--out")
    args = ap.parse_args()
    table = run_oracle_convergence({"target_metric": args.target_metric, "multipliers": args.multipliers})
    text = render(table, "csv")
    if args.out:
        open(args.out, "w").write(text)
    else:
        sys.stdout.write(text)
    T = np.array([r["duration"] for r in table.rows])
    gap = np.array([r["gap"] for r in table.rows])
    slope = np.polyfit(np.log(T), np.log(gap), 1)[0]
    print(f"gap ~ T^{slope:.2f}", file=sys.stderr)


if __name__ == "__main__":
    main()
