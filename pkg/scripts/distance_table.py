"""Spectral distance between integer points, normalized by the p-adic distance."""

import argparse
import csv
import sys

from padic_spectral.metrics import connes_distance, distance_bounds, lipschitz_ball_distance
from padic_spectral.padic_core import PAdicApprox, padic_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--base", type=int, default=0, help="fixed first point")
    args = ap.parse_args()

    p, N = args.p, args.depth
    x = PAdicApprox.from_int(args.base, p, N)
    w = csv.writer(sys.stdout)
    w.writerow(["x", "y", "rho", "dist_L", "lower", "upper", "lower_over_rho", "bound_lo", "bound_hi", "stable"])
    for Y in range(p**N):
        if Y == args.base:
            continue
        y = PAdicApprox.from_int(Y, p, N)
        rho = float(padic_distance(x, y))
        est = connes_distance(x, y, N)
        nxt = connes_distance(x, y, N + 1)
        lo, hi = distance_bounds(p, rho)
        w.writerow([
            args.base, Y, rho, lipschitz_ball_distance(x, y), f"{est.lower:.10f}", f"{est.upper:.10f}",
            f"{est.lower / rho:.6f}", f"{lo:.6f}", f"{hi:.6f}", abs(nxt.lower - est.lower) <= 1e-6,
        ])


if __name__ == "__main__":
    main()
