"""Box phase across a full turn around the flux line, for several flux values.

Each row is one (eta, Theta) point; case (a) sits at zero, case (c) at
2 pi eta (mod 2 pi), case (b) interpolates between them.
"""
import argparse
import csv
import sys

from noncyclic.abbox import ABConfig, ab_sweep, regime


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, nargs="+", default=[0.1, 0.3, 0.45, 0.7])
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--mode", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["eta", "theta", "regime", "gamma_unwrapped", "overlap_abs"])
    for eta in args.eta:
        cfg = ABConfig(eta, mode=args.mode)
        for p in ab_sweep(cfg, args.steps):
            w.writerow([eta, f"{p.theta:.12g}", regime(cfg, p.theta), f"{p.gamma_unwrapped:.12g}",
                        f"{p.overlap_abs:.12g}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
