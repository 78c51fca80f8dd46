"""Lipschitz vs spectral seminorm over a seeded random corpus.

Prints one CSV row per function plus a summary of the observed ratio range
next to the two equivalence constants.
"""

import argparse
import csv
import sys

from padic_spectral.metrics import (
    LocallyConstantFunction,
    SeminormReport,
    check_equivalence,
    equivalence_constants,
    gen_random_lipschitz,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--level", type=int, default=6)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--complex", action="store_true")
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(SeminormReport.CSV_HEADER)
    corpus = [("padic_abs", LocallyConstantFunction.padic_abs(args.p, args.level))]
    corpus += [
        (f"seed={args.seed + i}", gen_random_lipschitz(args.seed + i, args.p, args.level, 1.0, args.complex))
        for i in range(args.count)
    ]
    ratios = []
    for name, phi in corpus:
        rep = check_equivalence(phi)
        w.writerow(rep.csv_row(name))
        if rep.lipschitz > 0:
            ratios.append(rep.ratio)
    c_low, c_up = equivalence_constants(args.p)
    print(f"# ratio range [{min(ratios):.6f}, {max(ratios):.6f}] within [{c_low:.6f}, {c_up:.6f}]", file=sys.stderr)


if __name__ == "__main__":
    main()
