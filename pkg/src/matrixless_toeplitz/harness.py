"""Error metrics, coefficient cache, and the precompute/approximate/errors runs."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .eigensolver import PRECISIONS, Spectrum, compute_spectrum
from .errors import UntrackedIndexError
from .extreme import ExtremeTable, approx_extreme_eigenvalues, build_extreme_table
from .inner import (
    BasisTerm,
    CoefficientTable,
    approx_inner_eigenvalues,
    basis_ordering,
    build_inner_table,
    xi_eval,
)
from .symbol import SymbolParams, fourier_coefficients

log = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1
ORACLE_DEFAULT_CAP = 2048
ORACLE_HARD_CAP = 8192
TABLE_EPSILON = Fraction(1, 8)

REGIME_LOW = "extreme-low"
REGIME_INNER = "inner"
REGIME_HIGH = "extreme-high"


# ---------------------------------------------------------------- metrics


def absolute_error(exact, approx):
    return np.abs(np.asarray(exact) - np.asarray(approx))


def relative_error(exact, approx, scale: float = 1.0):
    exact = np.asarray(exact)
    if np.any(np.abs(exact) < 1e-300 * scale):
        raise ZeroDivisionError("relative error undefined for a zero exact value")
    return absolute_error(exact, approx) / np.abs(exact)


def extreme_width(n: int, epsilon) -> int:
    """floor(epsilon * n); exact for Fraction epsilon."""
    if isinstance(epsilon, (Fraction, int)):
        return math.floor(Fraction(epsilon) * n)
    return math.floor(epsilon * n)


def regime_tags(n: int, epsilon) -> np.ndarray:
    w = extreme_width(n, epsilon)
    js = np.arange(1, n + 1)
    tags = np.full(n, REGIME_INNER, dtype=object)
    tags[js <= w] = REGIME_LOW
    tags[js >= n - w + 1] = REGIME_HIGH
    return tags


def inner_window(n: int, epsilon=TABLE_EPSILON) -> np.ndarray:
    """Indices floor(eps n) + 1 .. n - floor(eps n)."""
    w = extreme_width(n, epsilon)
    return np.arange(w + 1, n - w + 1)


def max_inner_error(exact, approx, n: int, k: int, alpha: float, epsilon=TABLE_EPSILON):
    """(max AE over the inner window, that maximum divided by xi_k(n))."""
    js = inner_window(n, epsilon)
    ae = absolute_error(np.asarray(exact)[js - 1], np.asarray(approx)[js - 1])
    ae_max = float(ae.max()) if len(ae) else 0.0
    return ae_max, ae_max / xi_eval(basis_ordering(alpha, k)[k - 1], n)


def fourier_trace(sym: SymbolParams, n: int) -> complex:
    """trace T_n(a) = n a_0, the reference value for sum of eigenvalues."""
    return n * complex(fourier_coefficients(sym, 0)[0])


def global_relative_error(exact, inner_approx, extreme_approx, epsilon) -> np.ndarray:
    """Extreme-regime RE on both ends of the spectrum, inner RE elsewhere."""
    exact = np.asarray(exact)
    n = len(exact)
    tags = regime_tags(n, epsilon)
    out = relative_error(exact, inner_approx) if inner_approx is not None else np.zeros(n)
    ext = tags != REGIME_INNER
    if ext.any():
        out = np.array(out, dtype=float)
        out[ext] = relative_error(exact[ext], np.asarray(extreme_approx)[ext])
    return out


# ----------------------------------------------------------------- config


def parse_fraction(text) -> Fraction:
    return Fraction(str(text)).limit_denominator(10**9)


@dataclass
class RunConfig:
    alpha: float = 0.75
    f_series: tuple = (1.0,)
    n1: int = 100
    k_inner: int = 7
    k_extreme: int = 7
    j0: int = 100
    epsilon: Fraction = TABLE_EPSILON
    target_sizes: tuple[int, ...] = (256, 512, 1024)
    precision: str = "hw"
    cache: Path | None = None
    out: Path | None = None
    oracle_cap: int = ORACLE_DEFAULT_CAP
    workers: int = 4

    def __post_init__(self):
        self.epsilon = parse_fraction(self.epsilon)
        if not 0 < self.epsilon < Fraction(1, 2):
            raise ValueError("epsilon must lie in (0, 1/2)")
        if self.k_inner < 2:
            raise ValueError("k_inner must be >= 2")
        if self.k_extreme < 1:
            raise ValueError("k_extreme must be >= 1")
        if not 1 <= self.j0 <= self.n1:
            raise ValueError("j0 must lie in 1..n1")
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}")
        if self.oracle_cap > ORACLE_HARD_CAP:
            raise ValueError(f"oracle sizes are capped at {ORACLE_HARD_CAP}")

    @property
    def symbol(self) -> SymbolParams:
        return SymbolParams(self.alpha, tuple(self.f_series))

    def precompute_sizes(self) -> list[int]:
        levels = max(self.k_inner - 1, self.k_extreme)
        return [level * self.n1 for level in range(1, levels + 1)]


# ------------------------------------------------------------------ cache


@dataclass
class Cache:
    """Product of the precompute and extrapolation phases."""

    symbol: SymbolParams
    inner: CoefficientTable
    extreme: ExtremeTable
    precision: str = "hw"
    meta: dict = field(default_factory=dict)


def _pairs(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def _unpairs(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def cache_to_dict(cache: Cache) -> dict:
    inner, ext = cache.inner, cache.extreme
    return {
        "format_version": CACHE_FORMAT_VERSION,
        "precision": cache.precision,
        "alpha": cache.symbol.alpha,
        "f_series": [[c.real, c.imag] for c in cache.symbol.f_series],
        "n1": inner.n1,
        "levels_inner": inner.k,
        "levels_extreme": ext.k,
        "mirror": inner.mirror,
        "basis": [
            {"r": t.r, "m": t.m, "ell": t.ell, "exponent": t.exponent} for t in inner.basis
        ],
        # inner_coefficients[s - 1][j1 - 1] = [re, im]; NaN marks sigma = 1
        "inner_coefficients": _pairs(inner.grid_values),
        "extreme_j0": ext.j0,
        "extreme_sizes": list(ext.sizes),
        "extreme_mirror": ext.mirror,
        # extreme_low[j - 1][m - 1] = [re, im]
        "extreme_low": _pairs(ext.q_low),
        "extreme_high": None if ext.q_high is None else _pairs(ext.q_high),
        "meta": cache.meta,
    }


def cache_from_dict(data: dict) -> Cache:
    if data.get("format_version") != CACHE_FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {data.get('format_version')!r}")
    sym = SymbolParams(data["alpha"], tuple(complex(re, im) for re, im in data["f_series"]))
    basis = tuple(BasisTerm(b["r"], b["m"], b["ell"], b["exponent"]) for b in data["basis"])
    inner = CoefficientTable(
        alpha=data["alpha"],
        n1=data["n1"],
        k=data["levels_inner"],
        grid_values=_unpairs(data["inner_coefficients"]),
        basis=basis,
        mirror=data["mirror"],
    )
    high = data.get("extreme_high")
    ext = ExtremeTable(
        alpha=data["alpha"],
        j0=data["extreme_j0"],
        k=data["levels_extreme"],
        sizes=tuple(data["extreme_sizes"]),
        q_low=_unpairs(data["extreme_low"]),
        q_high=None if high is None else _unpairs(high),
        mirror=data["extreme_mirror"],
    )
    return Cache(sym, inner, ext, data.get("precision", "hw"), data.get("meta", {}))


def write_cache(cache: Cache, path) -> None:
    # json writes floats with repr(), which round-trips binary64 exactly
    text = json.dumps(cache_to_dict(cache), indent=1, allow_nan=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_cache(path) -> Cache:
    return cache_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# ------------------------------------------------------------------- runs


def compute_spectra(
    sym: SymbolParams, sizes: Sequence[int], precision: str = "hw", workers: int = 4
) -> dict[int, Spectrum]:
    """Reference spectra for several sizes, solved concurrently."""
    sizes = sorted(set(sizes))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        spectra = list(pool.map(lambda n: compute_spectrum(sym, n, precision), sizes))
    return dict(zip(sizes, spectra))


def build_cache(cfg: RunConfig, spectra: dict[int, Spectrum] | None = None) -> Cache:
    sym = cfg.symbol
    sizes = cfg.precompute_sizes()
    if spectra is None:
        log.info("precomputing spectra for sizes %s", sizes)
        spectra = compute_spectra(sym, sizes, cfg.precision, cfg.workers)
    ordered = [spectra[n] for n in sizes]
    inner = build_inner_table(sym, ordered[: cfg.k_inner - 1], cfg.k_inner)
    extreme = build_extreme_table(
        ordered[: cfg.k_extreme], cfg.j0, sym.alpha, cfg.k_extreme, mirror=sym.is_real
    )
    return Cache(sym, inner, extreme, cfg.precision, {"sizes": sizes})


def run_precompute(cfg: RunConfig) -> Cache:
    cache = build_cache(cfg)
    if cfg.cache is not None:
        write_cache(cache, cfg.cache)
    return cache


def approximate_spectrum(cache: Cache, n: int, k1: int, k2: int, epsilon):
    """All n approximations spliced by regime; returns (values, tags)."""
    if n < cache.inner.n1:
        raise ValueError(f"n={n} is below the precompute grid size {cache.inner.n1}")
    tags = regime_tags(n, epsilon)
    width = extreme_width(n, epsilon)
    if width > cache.extreme.j0:
        raise UntrackedIndexError(
            f"floor(eps n) = {width} exceeds the {cache.extreme.j0} tracked extreme indices"
        )
    js = np.arange(1, n + 1)
    out = np.empty(n, dtype=complex)
    inner = tags == REGIME_INNER
    out[inner] = approx_inner_eigenvalues(cache.symbol, cache.inner, n, js[inner], k1)
    if (~inner).any():
        out[~inner] = approx_extreme_eigenvalues(cache.extreme, n, js[~inner], k2)
    return out, tags


def write_approx_rows(fh, values, tags) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["j", "re(lambda)", "im(lambda)", "regime"])
    for j, (z, tag) in enumerate(zip(values, tags), start=1):
        w.writerow([j, repr(float(z.real)), repr(float(z.imag)), tag])


def write_approx_csv(path, values, tags) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_approx_rows(fh, values, tags)


def run_approximate(cache: Cache, n: int, k1: int, k2: int, epsilon, out=None):
    values, tags = approximate_spectrum(cache, n, k1, k2, epsilon)
    if out is not None:
        write_approx_csv(out, values, tags)
    return values, tags


@dataclass
class ErrorReport:
    """Errors of one (n, k) configuration against the reference spectrum."""

    n: int
    k: int
    ae: np.ndarray
    re: np.ndarray
    ae_max: float
    ae_normalized: float
    global_re: np.ndarray | None = None
    regimes: np.ndarray | None = None


def error_report(cache: Cache, exact: Spectrum, k: int, k2: int | None = None, epsilon=None):
    """Inner errors at level k; with ``epsilon`` also the spliced global RE."""
    n = exact.n
    sym = cache.symbol
    js = np.arange(1, n + 1)
    approx = approx_inner_eigenvalues(sym, cache.inner if k > 1 else None, n, js, k)
    ae = absolute_error(exact.values, approx)
    re = relative_error(exact.values, approx)
    ae_max, norm = max_inner_error(exact.values, approx, n, k, sym.alpha)
    rep = ErrorReport(n=n, k=k, ae=ae, re=re, ae_max=ae_max, ae_normalized=norm)
    if epsilon is not None:
        spliced, tags = approximate_spectrum(cache, n, k, k2 or k, epsilon)
        rep.global_re = relative_error(exact.values, spliced)
        rep.regimes = tags
    return rep


def write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def figure_rows(n: int, errors) -> list:
    """(j, 2 pi j/(n+1), log10 RE) rows."""
    js = np.arange(1, n + 1)
    with np.errstate(divide="ignore"):
        logs = np.log10(np.asarray(errors, dtype=float))
    return [[int(j), repr(float(2 * np.pi * j / (n + 1))), repr(float(v))] for j, v in zip(js, logs)]


def run_errors(cache: Cache, cfg: RunConfig, k_values: Sequence[int] | None = None, k2=None):
    """Max-error grid over (k, n) plus per-index figure data; returns the table rows.

    Files written to ``cfg.out`` (a directory) when set:
    ``table.csv`` with (k, n, AE_max, AE_normalized);
    ``inner_n{n}_k{k}.csv``, ``extreme_n{n}_k{k}.csv`` and
    ``global_n{n}.csv`` with (j, abscissa, log10_RE).
    """
    sizes = list(cfg.target_sizes)
    too_big = [n for n in sizes if n > cfg.oracle_cap]
    if too_big:
        raise ValueError(f"sizes {too_big} exceed the oracle cap {cfg.oracle_cap}")
    if k_values is None:
        k_values = range(1, cache.inner.k)
    k_values = list(k_values)
    sym = cache.symbol
    exact = compute_spectra(sym, sizes, cfg.precision, cfg.workers)
    out_dir = Path(cfg.out) if cfg.out is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    table = []
    for k in k_values:
        for n in sizes:
            rep = error_report(cache, exact[n], k)
            table.append((k, n, rep.ae_max, rep.ae_normalized))
            if out_dir is not None:
                write_rows(
                    out_dir / f"inner_n{n}_k{k}.csv", ["j", "abscissa", "log10_RE"],
                    figure_rows(n, rep.re),
                )
    if out_dir is not None:
        write_rows(
            out_dir / "table.csv",
            ["k", "n", "AE_max", "AE_normalized"],
            [[k, n, repr(float(a)), repr(float(b))] for k, n, a, b in table],
        )
        k2_top = k2 or cache.extreme.k
        for n in sizes:
            width = min(cache.extreme.j0, n // 2)
            js = np.arange(1, width + 1)
            for k in range(1, cache.extreme.k + 1):
                approx = approx_extreme_eigenvalues(cache.extreme, n, js, k)
                re = np.full(n, np.nan)
                re[js - 1] = relative_error(exact[n].values[js - 1], approx)
                rows = [r for r in figure_rows(n, re) if r[0] <= width]
                write_rows(out_dir / f"extreme_n{n}_k{k}.csv", ["j", "abscissa", "log10_RE"], rows)
            if extreme_width(n, cfg.epsilon) <= cache.extreme.j0:
                k1_top = max(k_values)
                spliced, _ = approximate_spectrum(cache, n, k1_top, k2_top, cfg.epsilon)
                write_rows(
                    out_dir / f"global_n{n}.csv",
                    ["j", "abscissa", "log10_RE"],
                    figure_rows(n, relative_error(exact[n].values, spliced)),
                )
    return table
