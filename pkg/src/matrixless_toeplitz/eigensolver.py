"""Reference ("exact") spectra of T_n(a) and their canonical ordering.

Eigenvalues come from LAPACK's nonsymmetric driver (balancing, Hessenberg
reduction, Francis double-shift QR). The optional extended backend polishes
each of them with Newton's method on det(T_n - lambda I), evaluated through
the lower Hessenberg Toeplitz determinant recurrence in mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

from .errors import ConvergenceError
from .symbol import SymbolParams, binomial_series, evaluate
from .toeplitz import build_dense, from_symbol

__all__ = [
    "Spectrum",
    "eigenvalues",
    "order_spectrum",
    "ordering_angles",
    "default_center",
    "compute_spectrum",
    "refine_eigenvalues",
    "hessenberg_determinant",
]

PRECISIONS = ("hw", "extended")


@dataclass(frozen=True)
class Spectrum:
    """Canonically ordered eigenvalues; ``values[j - 1]`` is lambda_j."""

    n: int
    values: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.n or len(self.angles) != self.n:
            raise ValueError("spectrum length does not match n")

    def __getitem__(self, j: int) -> complex:
        """1-based access, lambda_j."""
        if not 1 <= j <= self.n:
            raise IndexError(f"eigenvalue index {j} outside 1..{self.n}")
        return complex(self.values[j - 1])


def eigenvalues(matrix) -> np.ndarray:
    """All eigenvalues of a dense (lower Hessenberg) matrix, unordered."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("expected a square matrix")
    try:
        # transposing makes the input upper Hessenberg; the spectrum is unchanged
        vals = scipy.linalg.eigvals(matrix.T, overwrite_a=False, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR iteration did not converge for n={len(matrix)}") from exc
    return np.asarray(vals, dtype=complex)


def default_center(sym: SymbolParams) -> complex:
    """Interior reference point a(-1)/2 used for the ordering angle."""
    return complex(evaluate(sym, -1.0)) / 2.0


def ordering_angles(values, center: complex) -> np.ndarray:
    """Angle of each value seen from ``center``, in [0, 2 pi).

    The zero direction points from ``center`` to the origin (the image of the
    singular point t = 1).  ``center = 0`` falls back to Arg(lambda).
    """
    values = np.asarray(values, dtype=complex)
    if center == 0:
        rel = values
    else:
        rel = (values - center) / (-center)
    ang = np.angle(rel)
    return np.where(ang < 0, ang + 2.0 * np.pi, ang)


def order_spectrum(raw, sym: SymbolParams, center: complex | None = None) -> Spectrum:
    """Sort eigenvalues by ordering angle, ties by modulus; index j = 1..n.

    With the default center, eigenvalues close to zero on the upper branch
    get the smallest indices and their conjugates the largest, so lambda_j
    sits near a(omega_n^j) with omega_n = exp(-2 pi i / n).
    """
    raw = np.asarray(raw, dtype=complex)
    if center is None:
        center = default_center(sym)
    ang = ordering_angles(raw, center)
    order = np.lexsort((np.abs(raw), ang))
    return Spectrum(n=len(raw), values=raw[order], angles=ang[order])


def hessenberg_determinant(coeffs, lam, n: int, derivative: bool = False):
    """det(T_n - lam I) for lower Hessenberg Toeplitz coefficients a_{-1}, a_0, ...

    Uses D_m = sum_{k=1}^m (-a_{-1})^{k-1} g_{k-1} D_{m-k} with g_0 = a_0 - lam
    and g_k = a_k; works with any scalar type supporting + and *.
    Returns (D_n, D_n') when ``derivative`` is set.
    """
    s = -coeffs[0]
    g = [coeffs[1] - lam] + list(coeffs[2 : n + 1])
    # scaled copies: h_k = s^k g_k
    h = []
    p = 1
    for k in range(n):
        h.append(p * g[k])
        p = p * s
    d = [1] + [0] * n
    dd = [0] * (n + 1)
    for m in range(1, n + 1):
        acc = 0
        dacc = 0
        for k in range(1, m + 1):
            acc += h[k - 1] * d[m - k]
            if derivative:
                dacc += h[k - 1] * dd[m - k]
        if derivative:
            dacc -= d[m - 1]
        d[m] = acc
        dd[m] = dacc
    if derivative:
        return d[n], dd[n]
    return d[n]


def refine_eigenvalues(sym: SymbolParams, n: int, values, dps: int = 40, max_iter: int = 30):
    """Newton-polish hardware eigenvalues to ``dps`` decimal digits.

    Cost is O(n^2) multiprecision operations per Newton step and eigenvalue,
    which limits this backend to moderate n.
    """
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(sym.alpha)
        b = [mpmath.mpf(1)]
        for m in range(1, n + 1):
            b.append(b[-1] * (m - 1 - alpha) / m)
        f = [mpmath.mpc(c) for c in sym.f_series]
        coeffs = []
        for j in range(n + 1):
            coeffs.append(mpmath.fsum(f[i] * b[j - i] for i in range(min(j, len(f) - 1) + 1)))
        tol = mpmath.mpf(10) ** (-(dps - 5))
        out = []
        for lam0 in np.asarray(values, dtype=complex):
            lam = mpmath.mpc(lam0)
            for _ in range(max_iter):
                d, dd = hessenberg_determinant(coeffs, lam, n, derivative=True)
                step = d / dd
                lam -= step
                if abs(step) <= tol * (1 + abs(lam)):
                    break
            else:
                raise ConvergenceError("extended refinement did not converge", last=lam0)
            out.append(lam)
        return out


def compute_spectrum(sym: SymbolParams, n: int, precision: str = "hw") -> Spectrum:
    """Build T_n(a), solve, and order canonically."""
    if precision not in PRECISIONS:
        raise ValueError(f"unknown precision backend {precision!r}")
    raw = eigenvalues(build_dense(from_symbol(sym, n)))
    if precision == "extended":
        raw = np.array([complex(v) for v in refine_eigenvalues(sym, n, raw)])
    return order_spectrum(raw, sym)
