"""Wall time of the spliced approximation for growing n (linear total cost)."""

import argparse
import time
from fractions import Fraction

from matrixless_toeplitz.harness import RunConfig, approximate_spectrum, build_cache


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="10000,100000,1000000")
    ap.add_argument("--k", type=int, default=5)
    args = ap.parse_args()
    cache = build_cache(RunConfig())
    eps = Fraction(1, 10000)
    approximate_spectrum(cache, 1000, args.k, args.k, eps)
    for n in (int(x) for x in args.sizes.split(",")):
        t0 = time.perf_counter()
        approximate_spectrum(cache, n, args.k, args.k, eps)
        dt = time.perf_counter() - t0
        print(f"n={n:>9}  total {dt:8.3f}s  per eigenvalue {dt / n:.2e}s")


if __name__ == "__main__":
    main()
