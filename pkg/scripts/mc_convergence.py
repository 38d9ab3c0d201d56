"""Finite-N deviation of the Monte Carlo estimates from the exact infinitesimal moments.

python3 scripts/mc_convergence.py --sizes 64 128 256 --samples 200 > convergence.csv
"""

import argparse
import csv
import sys

from infprob.rmt import EnsembleSpec, estimate_inf_moments


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--orders", type=int, nargs="+", default=[2, 4])
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    writer = csv.writer(sys.stdout)
    writer.writerow(
        ["poly", "N", "n", "empirical_mean", "stderr", "theory", "deviation", "deviation_times_N"]
    )
    for poly, spectrum in (("comm", "pm1"), ("anticomm", "zero_two")):
        for N in args.sizes:
            spec = EnsembleSpec(N, (1,), spectrum, args.samples, args.seed)
            for r in estimate_inf_moments(spec, poly, args.orders, workers=args.workers):
                dev = abs(r.empirical_mean - r.theory)
                writer.writerow([poly, N, r.n, r.empirical_mean, r.stderr, r.theory, dev, dev * N])


if __name__ == "__main__":
    main()
