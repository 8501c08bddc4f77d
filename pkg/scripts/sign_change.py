"""Conical-model geometric phase versus final azimuth; the jump at Phi_f = pi."""
import argparse
import sys

from noncyclic.scenarios import render, run_conical_sign_change


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--R", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--method", choices=("analytic", "numeric"), default="analytic")
    ap.add_argument("--out")
    args = ap.parse_args()
    table = run_conical_sign_change({"R": args.R, "n_points": args.points, "method": args.method})
    text = render(table, "csv")
    if args.out:
        open(args.out, "w").write(text)
    else:
        sys.stdout.write(text)
    s = table.summary
    print(f"max |gamma| below pi: {s['max_abs_gamma_below_pi']:.3g}, "
          f"min |gamma| above pi: {s['min_abs_gamma_above_pi']:.12g}", file=sys.stderr)


if __name__ == "__main__":
    main()
