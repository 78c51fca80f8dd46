"""Hilbert-Schmidt norm of the truncated inverse against its limit, as CSV."""

import argparse
import csv
import sys

from padic_spectral.dirac import hs_norm_squared, hs_norm_squared_limit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--max-depth", type=int, default=20)
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["p", "N", "hs_squared", "limit", "gap", "gap_times_pN"])
    for p in args.primes:
        limit = hs_norm_squared_limit(p)
        for N in range(args.max_depth + 1):
            v = hs_norm_squared(p, N)
            # the gap decays like p**-N
            w.writerow([p, N, f"{v:.15g}", f"{limit:.15g}", f"{limit - v:.3e}", f"{(limit - v) * p**N:.6f}"])


if __name__ == "__main__":
    main()
