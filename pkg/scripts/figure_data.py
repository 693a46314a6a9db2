"""Write per-index log10 relative errors for the three figure families.

inner_n{n}_k{k}.csv and extreme_n{n}_k{k}.csv for n in {256, 512, 1024},
plus the spliced global curve at n = 2048 with eps = 1/30.
"""

import argparse
from fractions import Fraction
from pathlib import Path

from matrixless_toeplitz.harness import (
    RunConfig,
    approximate_spectrum,
    build_cache,
    compute_spectra,
    figure_rows,
    relative_error,
    run_errors,
    write_rows,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figure_data")
    ap.add_argument("--k", type=int, default=5)
    args = ap.parse_args()
    out = Path(args.out)
    cfg = RunConfig(out=out)
    cache = build_cache(cfg, compute_spectra(cfg.symbol, cfg.precompute_sizes()))
    run_errors(cache, cfg, range(1, args.k + 1), k2=args.k)

    n, eps = 2048, Fraction(1, 30)
    exact = compute_spectra(cfg.symbol, [n])[n]
    approx, _ = approximate_spectrum(cache, n, args.k, args.k, eps)
    re = relative_error(exact.values, approx)
    write_rows(out / f"global_n{n}_eps1_30.csv", ["j", "abscissa", "log10_RE"], figure_rows(n, re))
    print(f"n={n}: max RE {re.max():.3e}, median {sorted(re)[n // 2]:.3e}; files in {out}/")


if __name__ == "__main__":
    main()
