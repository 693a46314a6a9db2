"""Inner eigenvalues: extrapolation on a circular grid and interpolation.

For a grid size n1 and levels k the sizes n_l = l * n1 (l = 1..k-1) share
the grid points sigma_{j1} = omega_{n1}^{j1} = omega_{n_l}^{l j1}.  At each
grid point the preimages t = a^{-1}(lambda_{l j1}(T_{n_l})) are fitted to

    t = sigma n^{(alpha+1)/n} (1 + sum_s c_s xi_s(n)),

and the fitted c_s are interpolated to arbitrary omega_n^j.

For real symbols the spectrum is closed under conjugation with pairs
(j, n + 1 - j).  Coefficients are then extrapolated on the upper branch only
(indices with omega_n^j in the lower half of the circle, j <= n/2), the
remaining grid values are filled by conjugation, and approximations for
j > n/2 are the conjugates of their mirror partners.  The leading
coefficient on this branch is the principal-log value of p_{0,1,0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.special import gamma

from .eigensolver import Spectrum
from .errors import ConvergenceError, DomainError, IncompleteTableError, SingularSystemError
from .symbol import SymbolParams, derivative, evaluate, invert

__all__ = [
    "BasisTerm",
    "CoefficientTable",
    "basis_ordering",
    "xi_eval",
    "first_coefficient_constant",
    "exact_first_coefficient",
    "grid_point",
    "extrapolate_inner",
    "build_inner_table",
    "interpolate_coefficient",
    "interpolate_coefficients",
    "approx_inner_eigenvalue",
    "approx_inner_eigenvalues",
]

# node hits closer than this (radians) return the stored value
NODE_HIT_TOL = 1e-12
# extra interpolation nodes beyond k - s
EXTRA_NODES = 8


@dataclass(frozen=True, order=True)
class BasisTerm:
    """log(n)^ell / n^(alpha r + m)."""

    r: int
    m: int
    ell: int
    exponent: float

    def __post_init__(self):
        if self.r < 0 or self.m < 1 or not 0 <= self.ell < self.m:
            raise ValueError(f"invalid basis indices r={self.r}, m={self.m}, ell={self.ell}")

    def label(self) -> str:
        log = "" if self.ell == 0 else ("log(n)" if self.ell == 1 else f"log(n)^{self.ell}")
        return f"{log or '1'}/n^{self.exponent:g}"


def basis_ordering(alpha: float, count: int) -> list[BasisTerm]:
    """First ``count`` terms of {log^l(n)/n^(alpha r + m)} by decreasing size.

    Sorted by exponent, then by descending log power.  Terms that coincide as
    functions of n (same exponent and log power, possible for rational
    alpha) are kept once, with the smallest r.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    terms = []
    for r in range(count + 1):
        for m in range(1, count + 2):
            for ell in range(m):
                terms.append(BasisTerm(r, m, ell, alpha * r + m))
    terms.sort(key=lambda t: (t.exponent, -t.ell, t.r))
    out: list[BasisTerm] = []
    for t in terms:
        if out and abs(out[-1].exponent - t.exponent) < 1e-12 and out[-1].ell == t.ell:
            continue
        if any(abs(o.exponent - t.exponent) < 1e-12 and o.ell == t.ell for o in out):
            continue
        out.append(t)
        if len(out) == count:
            break
    return out


def xi_eval(term: BasisTerm, n):
    """log(n)^ell / n^exponent with the natural logarithm."""
    n = np.asarray(n, dtype=float)
    out = np.log(n) ** term.ell / n**term.exponent
    return float(out) if out.ndim == 0 else out


def first_coefficient_constant(sym: SymbolParams) -> complex:
    """c = f(1) Gamma(alpha + 1) sin(alpha pi) / pi."""
    a = sym.alpha
    return sym.f_at_one() * gamma(a + 1.0) * math.sin(a * math.pi) / math.pi


def exact_first_coefficient(sym: SymbolParams, z):
    """p_{0,1,0}(z) = log(a(z)^2 / (c a'(z) z^2)), principal logarithm."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0) or np.any(z == 1):
        raise DomainError("p_{0,1,0} undefined at z in {0, 1}")
    da = derivative(sym, z)
    if np.any(da == 0):
        raise ZeroDivisionError("a'(z) vanishes")
    ratio = evaluate(sym, z) ** 2 / (first_coefficient_constant(sym) * da * z**2)
    ratio = np.where(np.imag(ratio) == 0.0, np.real(ratio) + 0.0j, ratio)
    out = np.log(ratio)
    return out[()] if np.ndim(out) == 0 else out


def grid_point(n: int, j):
    """omega_n^j with omega_n = exp(-2 pi i / n)."""
    return np.exp(-2j * np.pi * np.asarray(j, dtype=float) / n)


def _xi_matrix(basis: Sequence[BasisTerm], sizes: Sequence[int]) -> np.ndarray:
    return np.array([[xi_eval(t, n) for t in basis] for n in sizes])


def _factor(matrix: np.ndarray):
    if matrix.shape[0] == 0:
        return None
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond * np.finfo(float).eps > 1e-2:
        raise SingularSystemError(f"extrapolation matrix is singular (cond={cond:.3e})")
    return scipy.linalg.lu_factor(matrix)


def _inner_rhs(sym: SymbolParams, spectra: Sequence[Spectrum], j1: int, n1: int) -> np.ndarray:
    sigma = complex(grid_point(n1, j1))
    rhs = []
    for level, spec in enumerate(spectra, start=1):
        n = spec.n
        if n != level * n1:
            raise ValueError(f"spectrum {level} has size {n}, expected {level * n1}")
        j = level * j1
        rho = n ** ((sym.alpha + 1.0) / n)
        try:
            t = invert(sym, spec[j], sigma * rho)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"inversion failed at size {n}, index {j}", last=exc.last, residual=exc.residual
            ) from exc
        rhs.append(t / (sigma * rho) - 1.0)
    return np.array(rhs)


def extrapolate_inner(
    sym: SymbolParams, spectra: Sequence[Spectrum], j1: int, k: int
) -> np.ndarray:
    """Estimates c_1..c_{k-1} at sigma_{j1} from spectra of sizes n1, 2 n1, ..."""
    if len(spectra) < k - 1:
        raise ValueError(f"{k} levels need {k - 1} spectra, got {len(spectra)}")
    spectra = list(spectra)[: k - 1]
    n1 = spectra[0].n
    basis = basis_ordering(sym.alpha, max(k - 1, 1))[: k - 1]
    lu = _factor(_xi_matrix(basis, [s.n for s in spectra]))
    if lu is None:
        return np.zeros(0, dtype=complex)
    return scipy.linalg.lu_solve(lu, _inner_rhs(sym, spectra, j1, n1))


@dataclass(frozen=True)
class CoefficientTable:
    """Extrapolated c_s(sigma_{j1}) on the n1 grid.

    ``grid_values[s - 1, j1 - 1]`` is c_s at sigma_{j1}.  The column j1 = n1
    (sigma = 1, the singular point) is NaN.  ``mirror`` marks the
    conjugate-branch convention used for real symbols.
    """

    alpha: float
    n1: int
    k: int
    grid_values: np.ndarray
    basis: tuple[BasisTerm, ...]
    mirror: bool

    def __post_init__(self):
        if self.grid_values.shape != (self.k - 1, self.n1):
            raise ValueError("grid_values shape does not match (k - 1, n1)")
        if len(self.basis) != self.k - 1:
            raise ValueError("basis length does not match k - 1")

    def is_complete(self) -> bool:
        return bool(np.all(np.isfinite(self.grid_values[:, : self.n1 - 1])))

    def nodes(self) -> np.ndarray:
        return grid_point(self.n1, np.arange(1, self.n1 + 1))


def build_inner_table(
    sym: SymbolParams, spectra: Sequence[Spectrum], k: int, mirror: bool | None = None
) -> CoefficientTable:
    """Run the inner extrapolation at every grid point sigma_{j1}, j1 < n1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    spectra = list(spectra)[: k - 1]
    if len(spectra) < k - 1:
        raise ValueError(f"{k} levels need {k - 1} spectra")
    if mirror is None:
        mirror = sym.is_real
    n1 = spectra[0].n if spectra else 0
    if k == 1:
        raise ValueError("an inner table needs k >= 2")
    basis = tuple(basis_ordering(sym.alpha, k - 1))
    lu = _factor(_xi_matrix(basis, [s.n for s in spectra]))
    values = np.full((k - 1, n1), np.nan + 0j)
    direct = range(1, n1 // 2 + 1) if mirror else range(1, n1)
    rhs = np.column_stack([_inner_rhs(sym, spectra, j1, n1) for j1 in direct])
    values[:, np.array(direct) - 1] = scipy.linalg.lu_solve(lu, rhs)
    if mirror:
        for j1 in range(n1 // 2 + 1, n1):
            values[:, j1 - 1] = np.conj(values[:, n1 - j1 - 1])
    return CoefficientTable(
        alpha=sym.alpha, n1=n1, k=k, grid_values=values, basis=basis, mirror=mirror
    )


def _positions(n1: int, omega) -> np.ndarray:
    """Grid position u in node units: omega = omega_{n1}^u, u in [0, n1)."""
    ang = -np.angle(np.asarray(omega, dtype=complex))
    ang = np.where(ang < 0, ang + 2.0 * np.pi, ang)
    return ang * n1 / (2.0 * np.pi)


def _arc(table: CoefficientTable, upper: bool) -> tuple[int, int, np.ndarray]:
    """(lo, hi, values) for the contiguous run of usable nodes j1 = lo..hi."""
    n1 = table.n1
    vals = table.grid_values
    if not table.mirror:
        return 1, n1 - 1, vals
    if upper:
        return 1, n1 // 2, vals
    lo = (n1 + 1) // 2
    vals = vals.copy()
    if n1 % 2 == 0:
        # sigma = -1 seen from the lower branch
        vals[:, lo - 1] = np.conj(vals[:, lo - 1])
    return lo, n1 - 1, vals


def _barycentric_weights(m: int, n1: int) -> np.ndarray:
    x = grid_point(n1, np.arange(m))
    w = np.array([1.0 / np.prod([x[i] - x[q] for q in range(m) if q != i]) for i in range(m)])
    return w


def _interp_arc(n1, lo, hi, row, u, omega, m):
    """Interpolate one coefficient row at positions u on the arc lo..hi."""
    m = min(m, hi - lo + 1)
    start = np.clip(np.ceil(u - m / 2.0), lo, hi - m + 1).astype(int)
    idx = start[:, None] + np.arange(m)
    x = grid_point(n1, idx)
    y = row[idx - 1]
    if not np.all(np.isfinite(y)):
        raise IncompleteTableError("interpolation window contains missing coefficients")
    w = _barycentric_weights(m, n1)
    diff = omega[:, None] - x
    hit = np.abs(diff) < NODE_HIT_TOL
    diff = np.where(hit, 1.0, diff)
    c = w[None, :] / diff
    out = (c * y).sum(axis=1) / c.sum(axis=1)
    rows_hit = hit.any(axis=1)
    if rows_hit.any():
        out[rows_hit] = y[rows_hit][hit[rows_hit]]
    return out


def interpolate_coefficients(
    table: CoefficientTable, omega, k: int | None = None, upper: bool | None = None
) -> np.ndarray:
    """c_s(omega) for s = 1..k-1 at every omega; shape (k - 1, len(omega)).

    Each level s uses the k - s + 8 usable grid nodes closest to omega
    (a midpoint tie goes to the smaller index).
    """
    if k is None:
        k = table.k
    if not 1 <= k <= table.k:
        raise ValueError(f"k={k} outside 1..{table.k}")
    omega = np.atleast_1d(np.asarray(omega, dtype=complex))
    out = np.zeros((k - 1, len(omega)), dtype=complex)
    if k == 1 or len(omega) == 0:
        return out
    u = _positions(table.n1, omega)
    if upper is None:
        upper_mask = u <= table.n1 / 2.0 if table.mirror else np.ones(len(u), bool)
    else:
        upper_mask = np.full(len(u), bool(upper))
    for branch in (True, False):
        sel = upper_mask == branch
        if not sel.any():
            continue
        lo, hi, vals = _arc(table, branch)
        if hi < lo:
            raise IncompleteTableError("coefficient table has no usable nodes")
        for s in range(1, k):
            out[s - 1, sel] = _interp_arc(
                table.n1, lo, hi, vals[s - 1], u[sel], omega[sel], k - s + EXTRA_NODES
            )
    return out


def interpolate_coefficient(
    table: CoefficientTable, s: int, omega: complex, k: int | None = None
) -> complex:
    """Scalar form of :func:`interpolate_coefficients` for one level s."""
    k = table.k if k is None else k
    if not 1 <= s <= k - 1:
        raise ValueError(f"level s={s} outside 1..{k - 1}")
    return complex(interpolate_coefficients(table, [omega], k)[s - 1, 0])


def _direct(sym, table, n, j, k):
    omega = grid_point(n, j)
    rho = n ** ((sym.alpha + 1.0) / n)
    corr = np.ones(len(omega), dtype=complex)
    if k > 1:
        coeffs = interpolate_coefficients(table, omega, k)
        xi = np.array([xi_eval(t, n) for t in table.basis[: k - 1]])
        corr = corr + xi @ coeffs
    return evaluate(sym, omega * rho * corr)


def approx_inner_eigenvalues(
    sym: SymbolParams, table: CoefficientTable | None, n: int, js, k: int
) -> np.ndarray:
    """Vectorised k-term inner approximation of lambda_j(T_n(a)) for j in js.

    ``table`` may be None when k = 1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    js = np.atleast_1d(np.asarray(js, dtype=np.int64))
    if np.any((js < 1) | (js > n)):
        raise ValueError("indices must lie in 1..n")
    if k > 1 and table is None:
        raise ValueError("k > 1 needs a coefficient table")
    if table is not None and k > table.k:
        raise ValueError(f"table holds only {table.k} levels")
    mirror = sym.is_real if table is None else table.mirror
    if not mirror:
        return _direct(sym, table, n, js, k)
    # conjugate mirror: j > n/2 pairs with n + 1 - j
    base = np.where(2 * js > n + 1, n + 1 - js, js)
    out = _direct(sym, table, n, base, k)
    out = np.where(2 * js > n + 1, np.conj(out), out)
    if n % 2 == 1:
        out = np.where(2 * js == n + 1, out.real + 0j, out)
    return out


def approx_inner_eigenvalue(
    sym: SymbolParams, table: CoefficientTable | None, n: int, j: int, k: int
) -> complex:
    return complex(approx_inner_eigenvalues(sym, table, n, [j], k)[0])
