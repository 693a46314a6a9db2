import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matrixless_toeplitz.errors import ConvergenceError, CurveProximityError, DomainError
from matrixless_toeplitz.symbol import (
    SymbolParams,
    binomial_series,
    derivative,
    evaluate,
    fourier_coefficients,
    invert,
    is_inside_range,
    winding_number,
)

alphas = st.floats(0.05, 0.95)
thetas = st.floats(0.01, 2 * math.pi - 0.01)


def test_params_validation():
    with pytest.raises(ValueError):
        SymbolParams(1.0)
    with pytest.raises(ValueError):
        SymbolParams(0.0)
    with pytest.raises(ValueError):
        SymbolParams(0.5, (0.0, 1.0))
    assert SymbolParams(0.5).is_real
    assert not SymbolParams(0.5, (1.0, 0.2j)).is_real


def test_evaluate_examples(model):
    assert evaluate(model, 1.0) == 0
    assert evaluate(model, -1.0) == pytest.approx(-(2**0.75), rel=1e-14)
    assert evaluate(SymbolParams(0.5), 2.0) == pytest.approx(0.5j, abs=1e-15)
    with pytest.raises(DomainError):
        evaluate(model, 0.0)


def test_derivative_examples(model):
    assert derivative(model, -1.0) == pytest.approx(-(2**0.75) + 0.75 * 2**-0.25, rel=1e-13)
    assert abs(derivative(SymbolParams(0.5), 2.0)) < 1e-15
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            derivative(model, bad)


def _central_difference(sym, t, h=1e-6):
    return (evaluate(sym, t + h) - evaluate(sym, t - h)) / (2 * h)


def test_derivative_on_point_set(rng):
    sym = SymbolParams(0.75, (1.0, -0.3, 0.1))
    worst = 0.0
    for _ in range(100):
        t = rng.uniform(0.5, 1.5) * cmath.exp(1j * rng.uniform(0.2, 2 * math.pi - 0.2))
        d = derivative(sym, t)
        worst = max(worst, abs(d - _central_difference(sym, t)) / (1 + abs(d)))
    assert worst <= 1e-6


@given(alphas, thetas, st.floats(0.3, 2.0))
def test_derivative_matches_difference(alpha, theta, r):
    sym = SymbolParams(alpha)
    t = r * cmath.exp(1j * theta)
    if abs(t - 1) < 0.05:
        return
    d = derivative(sym, t)
    assert abs(d - _central_difference(sym, t)) <= 1e-6 * (1 + abs(d))


@given(alphas, thetas, st.floats(0.3, 2.0))
def test_conjugate_symmetry(alpha, theta, r):
    sym = SymbolParams(alpha, (1.0, 0.25))
    t = r * cmath.exp(1j * theta)
    assert evaluate(sym, t.conjugate()) == pytest.approx(evaluate(sym, t).conjugate(), abs=1e-14)


def test_branch_cut_location():
    sym = SymbolParams(0.5)
    above = evaluate(sym, 2.0 + 1e-12j)
    below = evaluate(sym, 2.0 - 1e-12j)
    assert abs(above - below) > 0.9
    left = evaluate(sym, 0.5 + 1e-12j)
    right = evaluate(sym, 0.5 - 1e-12j)
    assert abs(left - right) < 1e-10


def test_branch_continuous_on_circle(model):
    theta = np.linspace(1e-3, 2 * np.pi - 1e-3, 20001)
    vals = evaluate(model, np.exp(1j * theta))
    assert np.max(np.abs(np.diff(vals))) < 1e-2


def test_fourier_examples(model):
    a = fourier_coefficients(model, 2)
    assert a[-1] == 1
    assert a[0] == pytest.approx(-0.75, abs=1e-16)
    assert a[1] == pytest.approx(-3 / 32, abs=1e-16)
    assert a[2] == pytest.approx(-5 / 128, abs=1e-16)
    assert a[-2] == 0 and a[-7] == 0
    assert fourier_coefficients(model, -1).j_max == -1


@given(alphas, st.integers(0, 40))
def test_fourier_matches_binomial_formula(alpha, j):
    a = fourier_coefficients(SymbolParams(alpha), j)
    assert a[j] == pytest.approx((-1) ** (j + 1) * _binom(alpha, j + 1), rel=1e-12, abs=1e-300)


def _binom(alpha, k):
    out = 1.0
    for i in range(k):
        out *= (alpha - i) / (i + 1)
    return out


def test_fourier_general_f_against_quadrature():
    sym = SymbolParams(0.6, (1.0, 0.4 - 0.2j, 0.1))
    a = fourier_coefficients(sym, 6)
    # a_j = (1/2 pi) int a(e^{i th}) e^{-i j th}, trapezoid on a fine grid
    th = (np.arange(2**16) + 0.5) * 2 * np.pi / 2**16
    vals = evaluate(sym, np.exp(1j * th))
    for j in range(-1, 7):
        quad = np.mean(vals * np.exp(-1j * j * th))
        assert abs(quad - a[j]) < 1e-5


def test_binomial_series_sum():
    b = binomial_series(0.75, 4000)
    assert abs(b.sum()) < 2e-2  # (1 - 1)^alpha = 0, slow tail decay


def test_invert_examples(model):
    lam = evaluate(model, -1.0)
    assert invert(model, lam, -1 + 0.01j) == pytest.approx(-1.0, abs=1e-12)
    lam = evaluate(model, 1.05)
    # 30-digit reference; the rounded value -0.071209(1 - i) is quoted to about 3e-6
    ref = complex(mpmath.mpf(1) / mpmath.mpf("1.05") * mpmath.power(mpmath.mpc("-0.05", 0), 0.75))
    assert lam == pytest.approx(ref, abs=1e-16)
    assert lam == pytest.approx(-0.071209 + 0.071209j, abs=5e-6)
    assert invert(model, lam, 1.02 + 0.05j) == pytest.approx(1.05, abs=1e-10)
    with pytest.raises(DomainError):
        invert(model, 0.0, 0.5)


def test_invert_failure_reports_diagnostics(model):
    with pytest.raises(ConvergenceError) as info:
        invert(model, 50.0 + 50j, 1e-3, max_iter=3)
    assert info.value.last is not None


@given(alphas, st.floats(0.01, 0.99), st.floats(1.001, 1.2))
def test_invert_round_trip(alpha, frac, rho):
    sym = SymbolParams(alpha)
    w = cmath.exp(2j * math.pi * frac)
    lam = evaluate(sym, rho * w)
    t = invert(sym, lam, w)
    assert abs(evaluate(sym, t) - lam) <= 1e-13 * (1 + abs(lam))


def test_winding(model):
    assert is_inside_range(model, 10.0) == 0
    assert is_inside_range(model, -0.5, samples=4096) == -1
    w = winding_number(model, -0.5, samples=4096)
    assert abs(w - round(w)) <= 0.1
    with pytest.raises(CurveProximityError):
        is_inside_range(model, evaluate(model, cmath.exp(1j * math.pi / 4096)), samples=4096)
