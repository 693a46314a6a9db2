"""Matrix-less eigenvalue approximation for Hessenberg Toeplitz matrices
with symbol a(t) = t^{-1} (1 - t)^alpha f(t), 0 < alpha < 1."""

from .eigensolver import Spectrum, compute_spectrum, eigenvalues, order_spectrum
from .errors import (
    ConvergenceError,
    CurveProximityError,
    DomainError,
    IncompleteTableError,
    SingularSystemError,
    UntrackedIndexError,
)
from .extreme import ExtremeTable, approx_extreme_eigenvalues, build_extreme_table
from .harness import Cache, RunConfig, build_cache, read_cache, write_cache
from .inner import (
    CoefficientTable,
    approx_inner_eigenvalues,
    basis_ordering,
    build_inner_table,
    exact_first_coefficient,
)
from .symbol import SymbolParams, derivative, evaluate, fourier_coefficients, invert

__version__ = "0.1.0"
