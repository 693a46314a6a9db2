"""Command line interface: precompute, approx, errors, validate."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import harness
from .eigensolver import compute_spectrum
from .inner import exact_first_coefficient
from .symbol import evaluate, invert


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _coeffs(text: str) -> tuple[complex, ...]:
    return tuple(complex(x.replace(" ", "")) for x in text.split(","))


def _add_symbol_args(p):
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--f", type=_coeffs, default=(1.0,), help="comma separated f_0,f_1,...")


def _add_level_args(p):
    p.add_argument("--n1", type=int, default=100)
    p.add_argument("--levels-inner", type=int, default=7)
    p.add_argument("--levels-extreme", type=int, default=7)
    p.add_argument("--j0", type=int, default=100)
    p.add_argument("--precision", choices=["hw", "extended"], default="hw")


def _config(args, **extra) -> harness.RunConfig:
    return harness.RunConfig(
        alpha=args.alpha,
        f_series=args.f,
        n1=args.n1,
        k_inner=args.levels_inner,
        k_extreme=args.levels_extreme,
        j0=args.j0,
        precision=args.precision,
        **extra,
    )


def _load_or_build(args, cfg) -> harness.Cache:
    if args.cache is not None and Path(args.cache).exists():
        return harness.read_cache(args.cache)
    cache = harness.build_cache(cfg)
    if args.cache is not None:
        harness.write_cache(cache, args.cache)
    return cache


def cmd_precompute(args) -> int:
    cfg = _config(args, cache=args.cache)
    t0 = time.perf_counter()
    cache = harness.run_precompute(cfg)
    print(
        f"precomputed sizes {cache.meta['sizes']} in {time.perf_counter() - t0:.1f}s; "
        f"inner table {cache.inner.k - 1}x{cache.inner.n1}, "
        f"extreme table {cache.extreme.j0}x{cache.extreme.k} -> {args.cache}"
    )
    return 0


def cmd_approx(args) -> int:
    cache = harness.read_cache(args.cache)
    k1 = args.k or cache.inner.k
    k2 = args.k_extreme or min(args.k or cache.extreme.k, cache.extreme.k)
    for n in args.n:
        out = args.out
        if out is not None and len(args.n) > 1:
            out = Path(out).with_name(f"{Path(out).stem}_n{n}{Path(out).suffix}")
        values, _ = harness.run_approximate(cache, n, k1, k2, args.eps, out)
        if out is None:
            harness.write_approx_rows(sys.stdout, values, harness.regime_tags(n, args.eps))
    return 0


def cmd_errors(args) -> int:
    cfg = _config(args, target_sizes=tuple(args.n), epsilon=args.eps, out=args.out)
    cache = _load_or_build(args, cfg)
    kmax = args.k or cache.inner.k - 1
    table = harness.run_errors(cache, cfg, range(1, kmax + 1))
    print(f"{'k':>3} {'n':>6} {'AE_max':>12} {'AE/xi_k':>10}")
    for k, n, ae, norm in table:
        print(f"{k:>3} {n:>6} {ae:12.4e} {norm:10.4f}")
    return 0


def cmd_validate(args) -> int:
    """Oracle self-checks on the reference spectrum and the cache."""
    cfg = _config(args, target_sizes=tuple(args.n))
    cache = _load_or_build(args, cfg)
    sym = cache.symbol
    ok = True

    def report(name, passed, detail):
        nonlocal ok
        ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    for n in args.n:
        spec = compute_spectrum(sym, n)
        a0 = harness.fourier_trace(sym, n)
        rel = abs(spec.values.sum() - a0) / abs(a0)
        report(f"trace n={n}", rel <= 1e-10, f"relative deviation {rel:.2e}")
        if sym.is_real:
            gap = np.max(np.abs(np.sort_complex(spec.values) - np.sort_complex(spec.values.conj())))
            report(f"conjugate pairs n={n}", gap <= 1e-9, f"max gap {gap:.2e}")
    inner = cache.inner
    live = np.arange(1, inner.n1)
    p = exact_first_coefficient(sym, inner.nodes()[live - 1])
    dev = np.max(np.abs(inner.grid_values[0, live - 1] - p) / np.abs(p))
    report("first coefficient vs p_{0,1,0}", dev <= 1e-2, f"max relative deviation {dev:.2e}")
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        w = np.exp(2j * np.pi * rng.uniform(0.01, 0.99))
        rho = rng.uniform(1.001, 1.2)
        lam = complex(evaluate(sym, rho * w))
        t = invert(sym, lam, w)
        worst = max(worst, abs(evaluate(sym, t) - lam) / (1 + abs(lam)))
    report("inversion round trip", worst <= 1e-13, f"max scaled residual {worst:.2e}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matrixless-toeplitz",
        description="Matrix-less eigenvalue approximation for T_n(t^-1 (1-t)^alpha f(t)).",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("precompute", help="solve reference spectra and extrapolate")
    _add_symbol_args(p)
    _add_level_args(p)
    p.add_argument("--cache", type=Path, required=True)
    p.set_defaults(func=cmd_precompute)

    p = sub.add_parser("approx", help="approximate all eigenvalues from a cache")
    p.add_argument("--cache", type=Path, required=True)
    p.add_argument("--n", type=_ints, required=True)
    p.add_argument("--k", type=int, default=5, help="inner terms (and extreme terms by default)")
    p.add_argument("--k-extreme", type=int, default=None)
    p.add_argument("--eps", type=harness.parse_fraction, default=harness.TABLE_EPSILON)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("errors", help="error tables and figure data against dense solves")
    _add_symbol_args(p)
    _add_level_args(p)
    p.add_argument("--cache", type=Path, default=None)
    p.add_argument("--n", type=_ints, default=[256, 512, 1024])
    p.add_argument("--k", type=int, default=None, help="largest inner level to tabulate")
    p.add_argument("--eps", type=harness.parse_fraction, default=harness.TABLE_EPSILON)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_errors)

    p = sub.add_parser("validate", help="oracle self-checks")
    _add_symbol_args(p)
    _add_level_args(p)
    p.add_argument("--cache", type=Path, default=None)
    p.add_argument("--n", type=_ints, default=[64, 256])
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
