"""Print the error grid (max inner AE and AE / xi_k) for alpha = 3/4, f = 1."""

import argparse
import time

from matrixless_toeplitz.harness import RunConfig, build_cache, compute_spectra, run_errors

REFERENCE = {
    (1, 256): 1.5783e-2, (1, 1024): 4.0956e-3,
    (2, 256): 3.0955e-4, (2, 512): 8.8936e-5,
    (3, 256): 2.3674e-4, (3, 512): 6.6709e-5,
    (4, 256): 7.8781e-5, (4, 512): 2.0791e-5, (4, 1024): 5.3823e-6,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--levels", type=int, default=7)
    ap.add_argument("--out", default=None, help="directory for table.csv and figure data")
    args = ap.parse_args()
    cfg = RunConfig(k_inner=args.levels, out=args.out)
    t0 = time.perf_counter()
    cache = build_cache(cfg, compute_spectra(cfg.symbol, cfg.precompute_sizes()))
    table = run_errors(cache, cfg, range(1, args.kmax + 1))
    print(f"{'k':>2} {'n':>5} {'AE_max':>11} {'AE/xi_k':>8} {'vs ref':>7}")
    for k, n, ae, norm in table:
        ref = REFERENCE.get((k, n))
        ratio = f"{ae / ref:7.3f}" if ref else ""
        print(f"{k:>2} {n:>5} {ae:11.4e} {norm:8.4f} {ratio}")
    print(f"total {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
