"""Extreme eigenvalues: per-index power-law extrapolation in h = 1/(n + 1).

For a fixed index j counted from either end of the ordered spectrum,

    lambda_j(T_n) ~ q_1(j) h^alpha + q_2(j) h^(alpha+1) + ... + q_k(j) h^(alpha+k-1).

The q's are fitted from k precomputed spectra and evaluated at any n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .eigensolver import Spectrum
from .errors import SingularSystemError, UntrackedIndexError

__all__ = [
    "ExtremeTable",
    "extreme_matrix",
    "solve_power_law",
    "extrapolate_extreme",
    "build_extreme_table",
    "approx_extreme_eigenvalue",
    "approx_extreme_eigenvalues",
]


def extreme_matrix(sizes: Sequence[int], alpha: float, k: int) -> np.ndarray:
    """Rows (h^alpha, h^(alpha+1), ..., h^(alpha+k-1)) with h = 1/(n+1)."""
    h = 1.0 / (np.asarray(sizes, dtype=float) + 1.0)
    return h[:, None] ** (alpha + np.arange(k)[None, :])


def _solve_power_law_mp(sizes, rhs, alpha, k):
    """Extended-precision solve at the ambient mpmath working precision."""
    h = [1 / (mpmath.mpf(n) + 1) for n in sizes]
    alpha = mpmath.mpf(alpha)
    vander = mpmath.matrix([[hl**m for m in range(k)] for hl in h])
    scaled = mpmath.matrix([mpmath.mpc(r) / hl**alpha for r, hl in zip(rhs, h)])
    try:
        return list(mpmath.lu_solve(vander, scaled))
    except ZeroDivisionError as exc:
        raise SingularSystemError("extreme extrapolation system is singular") from exc


def solve_power_law(sizes, rhs, alpha, k):
    """q_1..q_k with sum_m q_m h_l^(alpha+m-1) = rhs_l, h_l = 1/(n_l + 1).

    ``rhs`` may be an (k,) or (k, J) array of complex values, or a sequence
    of mpmath numbers; in the latter case the solve runs in mpmath and
    returns a list of mpc values.
    """
    if len(sizes) != k:
        raise ValueError(f"{k} levels need {k} sizes, got {len(sizes)}")
    if len(set(int(n) for n in sizes)) != k:
        raise SingularSystemError("extreme extrapolation needs distinct sizes")
    if len(rhs) and isinstance(rhs[0], (mpmath.mpf, mpmath.mpc)):
        return _solve_power_law_mp(sizes, rhs, alpha, k)
    return _solve_power_law(sizes, rhs, alpha, k)


def _solve_power_law(sizes, rhs, alpha, k):
    sizes = np.asarray(sizes, dtype=float)
    h = 1.0 / (sizes + 1.0)
    # dividing row l by h_l^alpha leaves a Vandermonde system in h; solving
    # in x = h / max(h) keeps the columns comparably scaled
    h_max = h.max()
    vander = np.vander(h / h_max, k, increasing=True)
    rhs = np.asarray(rhs)
    scaled = rhs / (h[:, None] ** alpha if rhs.ndim == 2 else h**alpha)
    cond = np.linalg.cond(vander)
    if not np.isfinite(cond) or cond * np.finfo(float).eps > 1e-2:
        raise SingularSystemError(f"extreme extrapolation system is singular (cond={cond:.3e})")
    coeffs = np.linalg.solve(vander, scaled)
    powers = h_max ** -np.arange(k)
    return coeffs * (powers[:, None] if coeffs.ndim == 2 else powers)


def extrapolate_extreme(
    spectra: Sequence[Spectrum], j: int, alpha: float, k: int, end: str = "low"
) -> np.ndarray:
    """q_1(j)..q_k(j) from the j-th eigenvalue (from ``end``) of k spectra."""
    spectra = list(spectra)[:k]
    if len(spectra) < k:
        raise ValueError(f"{k} levels need {k} spectra, got {len(spectra)}")
    sizes = [s.n for s in spectra]
    if end == "low":
        rhs = np.array([s[j] for s in spectra])
    elif end == "high":
        rhs = np.array([s[s.n + 1 - j] for s in spectra])
    else:
        raise ValueError("end must be 'low' or 'high'")
    return solve_power_law(sizes, rhs, alpha, k)


@dataclass(frozen=True)
class ExtremeTable:
    """Fitted q_m(j) for j = 1..j0 at each end; ``q_low[j - 1, m - 1]``.

    With ``mirror`` set (real symbols) the high end is the conjugate of the
    low end and ``q_high`` is None.
    """

    alpha: float
    j0: int
    k: int
    sizes: tuple[int, ...]
    q_low: np.ndarray
    q_high: np.ndarray | None
    mirror: bool

    def __post_init__(self):
        if self.q_low.shape != (self.j0, self.k):
            raise ValueError("q_low shape does not match (j0, k)")
        if not self.mirror and (self.q_high is None or self.q_high.shape != (self.j0, self.k)):
            raise ValueError("q_high required when mirror is off")


def build_extreme_table(
    spectra: Sequence[Spectrum], j0: int, alpha: float, k: int, mirror: bool = True
) -> ExtremeTable:
    spectra = list(spectra)[:k]
    if len(spectra) < k:
        raise ValueError(f"{k} levels need {k} spectra")
    if j0 > min(s.n for s in spectra):
        raise ValueError("j0 exceeds the smallest precomputed size")
    sizes = [s.n for s in spectra]
    low = np.array([[s[j] for s in spectra] for j in range(1, j0 + 1)]).T
    q_low = solve_power_law(sizes, low, alpha, k).T
    q_high = None
    if not mirror:
        high = np.array([[s[s.n + 1 - j] for s in spectra] for j in range(1, j0 + 1)]).T
        q_high = solve_power_law(sizes, high, alpha, k).T
    return ExtremeTable(
        alpha=alpha, j0=j0, k=k, sizes=tuple(sizes), q_low=q_low, q_high=q_high, mirror=mirror
    )


def approx_extreme_eigenvalues(table: ExtremeTable, n: int, js, k: int | None = None) -> np.ndarray:
    """sum_{m=1}^k q_m(j) / (n+1)^(alpha+m-1) for each j in js."""
    k = table.k if k is None else k
    if not 1 <= k <= table.k:
        raise ValueError(f"k={k} outside 1..{table.k}")
    js = np.atleast_1d(np.asarray(js, dtype=np.int64))
    low = js <= table.j0
    high = (js > n - table.j0) & ~low
    if not np.all(low | high) or np.any((js < 1) | (js > n)):
        bad = js[~(low | high)]
        raise UntrackedIndexError(f"indices {bad[:5].tolist()} outside the tracked window")
    weights = (n + 1.0) ** -(table.alpha + np.arange(k))
    out = np.empty(len(js), dtype=complex)
    out[low] = table.q_low[js[low] - 1, :k] @ weights
    mirrored = n + 1 - js[high]
    if table.mirror:
        out[high] = np.conj(table.q_low[mirrored - 1, :k] @ weights)
    else:
        out[high] = table.q_high[mirrored - 1, :k] @ weights
    return out


def approx_extreme_eigenvalue(table: ExtremeTable, n: int, j: int, k: int | None = None) -> complex:
    return complex(approx_extreme_eigenvalues(table, n, [j], k)[0])
