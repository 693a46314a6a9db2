import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matrixless_toeplitz.eigensolver import Spectrum, compute_spectrum
from matrixless_toeplitz.errors import SingularSystemError, UntrackedIndexError
from matrixless_toeplitz.extreme import (
    approx_extreme_eigenvalue,
    approx_extreme_eigenvalues,
    build_extreme_table,
    extrapolate_extreme,
    extreme_matrix,
    solve_power_law,
)


def power_law_spectra(q, alpha, sizes, j=1):
    out = []
    for n in sizes:
        h = 1.0 / (n + 1)
        v = np.zeros(n, dtype=complex)
        v[j - 1] = sum(c * h ** (alpha + m) for m, c in enumerate(q))
        out.append(Spectrum(n, v, np.zeros(n)))
    return out


def test_single_level(precompute_spectra):
    s = precompute_spectra[100]
    for j in (1, 4, 60):
        q = extrapolate_extreme([s], j, 0.75, 1)
        assert q[0] == pytest.approx(101**0.75 * s[j], rel=1e-14)


def test_two_term_synthetic():
    q = np.array([1 + 1j, -2])
    got = extrapolate_extreme(power_law_spectra(q, 0.75, [100, 200]), 1, 0.75, 2)
    assert np.max(np.abs(got - q)) <= 1e-10


@given(
    st.integers(1, 2),
    st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=5, max_size=5),
    st.floats(0.1, 0.9),
)
def test_vandermonde_exactness(k, q, alpha):
    q = np.array(q[:k])
    sizes = [100 * (i + 1) for i in range(k)]
    got = extrapolate_extreme(power_law_spectra(q, alpha, sizes), 1, alpha, k)
    assert np.max(np.abs(got - q)) <= 1e-10 * max(1.0, np.max(np.abs(q)))


@given(
    st.integers(1, 5),
    st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=5, max_size=5),
    st.floats(0.1, 0.9),
)
def test_vandermonde_exactness_extended(k, q, alpha):
    sizes = [100 * (i + 1) for i in range(k)]
    with mpmath.workdps(50):
        h = [1 / (mpmath.mpf(n) + 1) for n in sizes]
        rhs = [sum(mpmath.mpc(c) * hl ** (mpmath.mpf(alpha) + m) for m, c in enumerate(q[:k])) for hl in h]
        got = solve_power_law(sizes, rhs, alpha, k)
    assert max(abs(complex(g) - c) for g, c in zip(got, q)) <= 1e-10


def test_hw_floor_grows_with_k():
    """At 64-bit the data rounding is amplified by roughly (n+1)^(k-1)."""
    q = np.ones(5)
    errs = []
    for k in range(1, 6):
        sizes = [100 * (i + 1) for i in range(k)]
        got = extrapolate_extreme(power_law_spectra(q[:k], 0.75, sizes), 1, 0.75, k)
        errs.append(np.max(np.abs(got - q[:k])))
    assert errs[0] < 1e-14 and errs[1] < 1e-10
    assert errs[4] > errs[1]


def test_high_end_index():
    sizes = [100, 200, 300]
    q = np.array([2 - 1j, 0.5, 3j])
    spectra = []
    for n in sizes:
        h = 1.0 / (n + 1)
        v = np.zeros(n, dtype=complex)
        v[n - 3] = sum(c * h ** (0.75 + m) for m, c in enumerate(q))
        spectra.append(Spectrum(n, v, np.zeros(n)))
    got = extrapolate_extreme(spectra, 3, 0.75, 3, end="high")
    assert np.max(np.abs(got - q)) <= 1e-10
    with pytest.raises(ValueError):
        extrapolate_extreme(spectra, 3, 0.75, 3, end="middle")


def test_duplicate_sizes_rejected():
    spectra = power_law_spectra([1, 1], 0.75, [100, 100])
    with pytest.raises(SingularSystemError):
        extrapolate_extreme(spectra, 1, 0.75, 2)


def test_matrix_rows():
    m = extreme_matrix([9, 99], 0.5, 3)
    np.testing.assert_allclose(m[0], [0.1**0.5, 0.1**1.5, 0.1**2.5])


def test_k1_approx(cache):
    t = cache.extreme
    got = approx_extreme_eigenvalue(t, 777, 5, 1)
    assert got == pytest.approx(t.q_low[4, 0] * 778**-0.75, rel=1e-15)


def test_mirror_is_exact_conjugate(cache):
    n = 900
    lo = approx_extreme_eigenvalues(cache.extreme, n, np.arange(1, 51), 5)
    hi = approx_extreme_eigenvalues(cache.extreme, n, n + 1 - np.arange(1, 51), 5)
    np.testing.assert_array_equal(hi, np.conj(lo))


def test_untracked_index(cache):
    with pytest.raises(UntrackedIndexError):
        approx_extreme_eigenvalue(cache.extreme, 1000, 101)
    with pytest.raises(UntrackedIndexError):
        approx_extreme_eigenvalue(cache.extreme, 1000, 0)


def test_unmirrored_table_agrees(model, precompute_spectra):
    spectra = [precompute_spectra[n] for n in (100, 200, 300, 400)]
    plain = build_extreme_table(spectra, 20, 0.75, 4, mirror=False)
    mirrored = build_extreme_table(spectra, 20, 0.75, 4)
    residual = np.max(np.abs(mirrored.q_low))
    assert np.max(np.abs(plain.q_high - np.conj(plain.q_low))) <= 1e-9 * residual
    assert approx_extreme_eigenvalue(plain, 1000, 999, 4) == pytest.approx(
        approx_extreme_eigenvalue(mirrored, 1000, 999, 4), rel=1e-9
    )


def test_leading_constant_stable(model, precompute_spectra):
    spectra = [precompute_spectra[n] for n in range(100, 700, 100)]
    first = extrapolate_extreme(spectra[:3], 1, 0.75, 3)[0]
    last = extrapolate_extreme(spectra[3:], 1, 0.75, 3)[0]
    assert abs(first - last) <= 0.05 * abs(last)


def test_relative_error_at_512(model, precompute_spectra):
    spectra = [precompute_spectra[n] for n in range(100, 700, 100)]
    table = build_extreme_table(spectra, 10, 0.75, 6)
    exact = compute_spectrum(model, 512)
    re = abs(approx_extreme_eigenvalue(table, 512, 1, 3) - exact[1]) / abs(exact[1])
    assert re <= 1e-3
