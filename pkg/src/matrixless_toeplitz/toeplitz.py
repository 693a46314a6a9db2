"""Lower Hessenberg Toeplitz matrices T_n(a) = (a_{j-k})."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .symbol import FourierCoefficients, SymbolParams, fourier_coefficients

__all__ = ["ToeplitzOperator", "build_dense", "matvec", "from_symbol"]


class InsufficientCoefficientsError(ValueError):
    pass


@dataclass(frozen=True)
class ToeplitzOperator:
    coeffs: FourierCoefficients
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix size must be positive")
        if self.coeffs.j_min != -1:
            raise ValueError("coefficients must start at index -1")
        if self.coeffs.j_max < self.n - 2:
            raise InsufficientCoefficientsError(
                f"need a_{{-1}}..a_{{{self.n - 2}}}, have up to a_{{{self.coeffs.j_max}}}"
            )

    def entry(self, j: int, k: int) -> complex:
        return self.coeffs[j - k]

    def column(self) -> np.ndarray:
        """First column a_0, a_1, ..., a_{n-1} (zero-padded past j_max)."""
        vals = self.coeffs.values[1 : self.n + 1]
        if len(vals) < self.n:
            vals = np.concatenate([vals, np.zeros(self.n - len(vals), dtype=vals.dtype)])
        return vals


def from_symbol(sym: SymbolParams, n: int) -> ToeplitzOperator:
    return ToeplitzOperator(fourier_coefficients(sym, n - 1), n)


def build_dense(op: ToeplitzOperator) -> np.ndarray:
    """Row-major n x n array with entry (j, k) = a_{j-k}."""
    col = op.column()
    row = np.zeros(op.n, dtype=col.dtype)
    row[0] = col[0]
    if op.n > 1:
        row[1] = op.coeffs[-1]
    return np.ascontiguousarray(scipy.linalg.toeplitz(col, row))


def matvec(op: ToeplitzOperator, x) -> np.ndarray:
    """y_j = sum_k a_{j-k} x_k without forming the matrix."""
    x = np.asarray(x)
    if x.shape != (op.n,):
        raise ValueError(f"expected a vector of length {op.n}, got shape {x.shape}")
    col = op.column()
    # lower triangular part is a causal convolution, plus the superdiagonal
    y = np.convolve(col, x)[: op.n].astype(np.result_type(col, x, complex))
    y[:-1] += op.coeffs[-1] * x[1:]
    return y
