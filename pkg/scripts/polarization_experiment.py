"""P_z(t) of a spin dragged by a field, adiabatic formula and exact propagation.

The field starts at (theta0, 0) and moves along the latitude theta0 through
an azimuth span; readouts are spread over the traversal.
"""
import argparse
import csv
import sys

import numpy as np

from noncyclic.experiment import polarization_series
from noncyclic.geodesic import SpherePath


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta0", type=float, default=np.pi / 3)
    ap.add_argument("--span", type=float, default=np.pi / 2)
    ap.add_argument("--omega-b", type=float, default=1.0)
    ap.add_argument("--duration", type=float, default=400.0)
    ap.add_argument("--readouts", type=int, default=200)
    ap.add_argument("--out")
    args = ap.parse_args()
    path = SpherePath(np.full(400, args.theta0), np.linspace(0.0, args.span, 400))
    times = np.linspace(0.0, args.duration, args.readouts + 1)
    analytic, oracle = polarization_series(args.theta0, path, args.omega_b, args.duration, times)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "p_z_analytic", "p_z_oracle"])
    for row in zip(times, analytic, oracle):
        w.writerow([f"{x:.12g}" for x in row])
    if args.out:
        fh.close()
    print(f"max |analytic - oracle| = {np.max(np.abs(analytic - oracle)):.3g}", file=sys.stderr)


if __name__ == "__main__":
    main()
