"""Generating functions of the form a(t) = t^{-1} (1 - t)^alpha f(t).

The factor ``(1 - t)**alpha`` uses the principal logarithm, so
``arg(1 - t)`` lies in ``(-pi, pi]`` and the branch cut is the real ray
``t > 1``.  ``f`` is a polynomial with ``f(0) != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, CurveProximityError, DomainError

__all__ = [
    "SymbolParams",
    "FourierCoefficients",
    "evaluate",
    "derivative",
    "fourier_coefficients",
    "invert",
    "winding_number",
    "is_inside_range",
]


def _as_coeffs(values) -> tuple[complex, ...]:
    return tuple(complex(v) for v in np.atleast_1d(np.asarray(values, dtype=complex)))


@dataclass(frozen=True)
class SymbolParams:
    """Parameters of ``a(t) = t^{-1} (1 - t)^alpha f(t)``.

    ``f_series`` holds ``(f_0, f_1, ..., f_d)`` with ``f(t) = sum f_m t^m``.
    """

    alpha: float
    f_series: tuple[complex, ...] = field(default=(1.0 + 0.0j,))

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        coeffs = _as_coeffs(self.f_series)
        if len(coeffs) == 0 or coeffs[0] == 0:
            raise ValueError("f_series[0] must be nonzero")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "f_series", coeffs)

    @property
    def is_real(self) -> bool:
        """True when every Fourier coefficient is real (real f coefficients)."""
        return all(c.imag == 0.0 for c in self.f_series)

    def f(self, t):
        # np.polyval wants the highest degree first
        return np.polyval(self.f_series[::-1], t)

    def f_prime(self, t):
        if len(self.f_series) == 1:
            return np.zeros_like(np.asarray(t, dtype=complex))
        d = [m * c for m, c in enumerate(self.f_series)][1:]
        return np.polyval(d[::-1], t)

    def f_at_one(self) -> complex:
        return complex(sum(self.f_series))


@dataclass(frozen=True)
class FourierCoefficients:
    """Fourier coefficients ``a_{-1}, a_0, ..., a_{j_max}``; zero below ``-1``."""

    values: np.ndarray
    j_min: int = -1

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.values) - 1

    def __getitem__(self, j: int) -> complex:
        if j < self.j_min:
            return 0.0
        if j > self.j_max:
            raise IndexError(f"coefficient a_{j} not available (j_max={self.j_max})")
        return self.values[j - self.j_min]


def _one_minus(t):
    w = 1.0 - np.asarray(t, dtype=complex)
    # a signed zero imaginary part would put 1 - t = -x on the wrong side of the cut
    return np.where(w.imag == 0.0, w.real + 0.0j, w)


def _check_domain(t, forbidden):
    t = np.asarray(t, dtype=complex)
    for bad in forbidden:
        if np.any(t == bad):
            raise DomainError(f"symbol not defined at t={bad}")
    return t


def evaluate(sym: SymbolParams, t):
    """Return a(t). Accepts scalars or arrays; raises DomainError at t = 0."""
    t = _check_domain(t, (0.0,))
    w = _one_minus(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(w == 0, 0.0, np.exp(sym.alpha * np.log(np.where(w == 0, 1.0, w))))
    out = power * sym.f(t) / t
    return out[()] if out.ndim == 0 else out


def derivative(sym: SymbolParams, t):
    """Closed-form a'(t); raises DomainError at t in {0, 1}."""
    t = _check_domain(t, (0.0, 1.0))
    w = _one_minus(t)
    log_w = np.log(w)
    p = np.exp(sym.alpha * log_w)
    p_minus = np.exp((sym.alpha - 1.0) * log_w)
    f = sym.f(t)
    out = -p * f / t**2 - sym.alpha * p_minus * f / t + p * sym.f_prime(t) / t
    return out[()] if out.ndim == 0 else out


def binomial_series(alpha: float, count: int) -> np.ndarray:
    """Taylor coefficients of (1 - t)^alpha: (-1)^m binom(alpha, m), m < count."""
    out = np.empty(count)
    if count == 0:
        return out
    out[0] = 1.0
    for m in range(1, count):
        out[m] = out[m - 1] * (m - 1 - alpha) / m
    return out


def fourier_coefficients(sym: SymbolParams, j_max: int) -> FourierCoefficients:
    """Fourier coefficients a_{-1}, ..., a_{j_max} of the symbol."""
    if j_max < -1:
        raise ValueError("j_max must be >= -1")
    count = j_max + 2
    b = binomial_series(sym.alpha, count)
    f = np.asarray(sym.f_series, dtype=complex)
    full = np.convolve(b, f)[:count]
    if sym.is_real:
        full = full.real
    return FourierCoefficients(values=np.asarray(full))


def invert(
    sym: SymbolParams,
    lam: complex,
    seed: complex,
    *,
    rtol: float = 1e-13,
    max_iter: int = 100,
    max_halvings: int = 60,
    polish: int = 3,
) -> complex:
    """Solve a(t) = lam near ``seed`` by damped Newton iteration.

    The step is halved while the residual fails to decrease; once the
    tolerance is met up to ``polish`` further steps are taken while they
    still reduce the residual. Raises
    ConvergenceError (carrying the last iterate and residual) when the
    residual does not reach ``rtol * (1 + |lam|)``.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 is the image of the branch point t = 1")
    tol = rtol * (1.0 + abs(lam))
    t = complex(seed)
    res = abs(evaluate(sym, t) - lam)
    for _ in range(max_iter):
        if res <= 0.1 * tol:
            break
        step = (evaluate(sym, t) - lam) / derivative(sym, t)
        for _ in range(max_halvings + 1):
            cand = t - step
            if cand != 0 and cand != 1:
                cres = abs(evaluate(sym, cand) - lam)
                if cres < res:
                    break
            step *= 0.5
        else:
            break
        if cand == t:
            break
        t, res = cand, cres
    # polish: full Newton steps down to the rounding floor of a(t)
    for _ in range(polish):
        if res == 0 or not res <= tol:
            break
        cand = t - (evaluate(sym, t) - lam) / derivative(sym, t)
        cres = abs(evaluate(sym, cand) - lam)
        if not cres < res:
            break
        t, res = cand, cres
    if not res <= tol:
        raise ConvergenceError(
            f"Newton inversion failed for lambda={lam!r} from seed={seed!r}",
            last=t,
            residual=res,
        )
    return t


def winding_number(sym: SymbolParams, lam: complex, samples: int = 4096) -> float:
    """Midpoint-rule value of (1/2 pi i) \\oint a'(t) / (a(t) - lam) dt over |t| = 1.

    Midpoints keep the sample set away from the singular point t = 1.
    """
    theta = 2.0 * np.pi * (np.arange(samples) + 0.5) / samples
    t = np.exp(1j * theta)
    z = evaluate(sym, t) - lam
    if np.min(np.abs(z)) < 1e-8:
        raise CurveProximityError(f"lambda={lam!r} lies on the sampled range of a")
    integrand = derivative(sym, t) * 1j * t / z
    return float((integrand.sum() * (2.0 * np.pi / samples) / (2j * np.pi)).real)


def is_inside_range(sym: SymbolParams, lam: complex, samples: int = 4096) -> int:
    """Rounded winding number of the range of a about ``lam``; nonzero inside."""
    return int(round(winding_number(sym, lam, samples)))
