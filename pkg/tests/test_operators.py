import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compressions import (
    HermitianMatrix,
    InputError,
    ScalarShift,
    Spectrum,
    eigenvalues_sorted,
    gen_clustered,
    gen_goe,
    gen_gue,
    gen_sphere_laplacian,
    ky_fan2,
    rho,
    sigma_k,
    spectral_distribution,
)
from compressions.operators import harmonic_dimension

from conftest import grid_sigma_k

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
spectra = st.lists(finite, min_size=1, max_size=20).map(Spectrum)


@st.composite
def spectrum_and_k(draw):
    s = draw(spectra)
    return s, draw(st.integers(1, s.n))


# -- types ----------------------------------------------------------------


def test_spectrum_sorted_descending_and_readonly():
    s = Spectrum([0.0, 3.0, 1.0])
    assert s.values.tolist() == [3.0, 1.0, 0.0]
    assert s.n == 3
    with pytest.raises(ValueError):
        s.values[0] = 5.0


@pytest.mark.parametrize("bad", [[], [1.0, np.nan], [np.inf]])
def test_spectrum_rejects_bad_values(bad):
    with pytest.raises(InputError):
        Spectrum(bad)


def test_hermitian_matrix_symmetrizes():
    m = HermitianMatrix(np.array([[1.0, 2.0], [2.0 + 1e-14, 0.0]]))
    assert np.array_equal(m.data, m.data.T)
    c = HermitianMatrix(np.array([[1.0, 1j], [-1j, 2.0 + 0j]]))
    assert c.field == "complex"
    assert np.array_equal(c.data, c.data.conj().T)


def test_hermitian_matrix_rejects_bad_input():
    with pytest.raises(InputError):
        HermitianMatrix(np.ones((2, 3)))
    with pytest.raises(InputError):
        HermitianMatrix(np.array([[np.nan]]))


def test_scalar_shift():
    assert ScalarShift(2.0).apply(Spectrum([3.0, 1.0])).values.tolist() == [1.0, -1.0]
    with pytest.raises(InputError):
        ScalarShift(math.inf)


# -- eigenvalues ----------------------------------------------------------


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.eye(3), [1.0, 1.0, 1.0]),
        (np.diag([3.0, 1.0, 0.0]), [3.0, 1.0, 0.0]),
        (np.array([[0.0, 1.0], [1.0, 0.0]]), [1.0, -1.0]),
    ],
)
def test_eigenvalues_examples(method, matrix, expected):
    got = eigenvalues_sorted(HermitianMatrix(matrix), method).values
    np.testing.assert_allclose(got, expected, atol=1e-14)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize("gen", [gen_goe, gen_gue])
def test_eigenvalues_contract(method, gen):
    m = gen(24, 5)
    vals = eigenvalues_sorted(m, method).values
    ref = np.linalg.eigvalsh(m.data)[::-1]
    assert np.all(np.diff(vals) <= 0)
    span = vals[0] - vals[-1]
    np.testing.assert_allclose(vals, ref, atol=1e-10 * span)
    trace = np.trace(m.data).real
    assert abs(vals.sum() - trace) <= 1e-9 * m.n * np.abs(m.data).max()


def test_eigenvalues_rejects_unknown_method():
    with pytest.raises(InputError):
        eigenvalues_sorted(HermitianMatrix(np.eye(2)), "qr")


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_diagonal_roundtrip_tiny_values(method):
    values = [0.0, 1.9083437275784418e-224]
    got = eigenvalues_sorted(HermitianMatrix.diagonal(values), method).values
    assert got.tolist() == values[::-1]


@given(st.lists(finite, min_size=1, max_size=12))
def test_diagonal_roundtrip(values):
    got = eigenvalues_sorted(HermitianMatrix.diagonal(values)).values
    assert np.array_equal(got, np.sort(values)[::-1])


# -- spectral distribution, rho, Ky Fan ------------------------------------


def test_spectral_distribution_examples():
    mu = spectral_distribution(Spectrum([3.0, 1.0, 0.0]))
    assert mu.atoms.tolist() == [0.0, 1.0, 3.0]
    np.testing.assert_allclose(mu.weights, [1 / 3] * 3)
    mu = spectral_distribution(Spectrum([1.0, 1.0]))
    assert mu.atoms.tolist() == [1.0] and mu.weights.tolist() == [1.0]
    mu = spectral_distribution(Spectrum([2.0, -2.0]))
    assert mu.atoms.tolist() == [-2.0, 2.0] and mu.weights.tolist() == [0.5, 0.5]


@pytest.mark.parametrize("values, expected", [([3, 1, 0], 1.5), ([4.2] * 5, 0.0), ([1, -1], 1.0)])
def test_rho_examples(values, expected):
    assert rho(Spectrum(values)) == expected


@pytest.mark.parametrize(
    "values, k, expected", [([3, 1, 0], 2, math.sqrt(10)), ([3, 1, 0], 3, math.sqrt(10)), ([-4, 2], 1, 4.0)]
)
def test_ky_fan2_examples(values, k, expected):
    assert ky_fan2(values, k) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("k", [0, 4])
def test_ky_fan2_k_out_of_range(k):
    with pytest.raises(InputError):
        ky_fan2([3, 1, 0], k)


# -- sigma_k --------------------------------------------------------------


def test_sigma_k_example():
    # grid oracle (step 1e-6 over [0, 3]) gives 2.1213203435596424 = sqrt(4.5)
    assert sigma_k(Spectrum([3, 1, 0]), 2) == pytest.approx(math.sqrt(4.5), abs=1e-9)


def test_sigma_k_scalar_operator():
    s = Spectrum([0.7] * 6)
    assert all(sigma_k(s, k) == 0.0 for k in range(1, 7))


def test_sigma_k_single_outlier():
    # top-2 of {(10 - lam)^2, lam^2, ...} is minimized at lam = 5
    s = Spectrum([10.0] + [0.0] * 99)
    assert sigma_k(s, 2) == pytest.approx(math.sqrt(50.0), abs=1e-12)
    assert rho(s) == 5.0


def test_sigma_k_full_k_is_centered_frobenius(rng):
    v = rng.normal(size=9)
    assert sigma_k(Spectrum(v), 9) == pytest.approx(np.linalg.norm(v - v.mean()), rel=1e-12)


@pytest.mark.parametrize("k", [0, 4])
def test_sigma_k_k_out_of_range(k):
    with pytest.raises(InputError):
        sigma_k(Spectrum([3, 1, 0]), k)


def test_sigma_k_matches_grid_oracle(rng):
    for _ in range(8):
        n = int(rng.integers(2, 13))
        v = rng.uniform(-0.5, 0.5, size=n)
        k = int(rng.integers(1, n + 1))
        assert sigma_k(Spectrum(v), k) == pytest.approx(grid_sigma_k(v, k), abs=1e-5)


@given(spectrum_and_k())
def test_sigma_1_is_rho(sk):
    s, _ = sk
    assert sigma_k(s, 1) == pytest.approx(rho(s), abs=1e-12 * (1 + rho(s)))


@given(spectrum_and_k())
def test_sigma_k_sandwich(sk):
    s, k = sk
    r, sig = rho(s), sigma_k(s, k)
    tol = 1e-9 * (1 + r)
    assert r - tol <= sig <= math.sqrt(k) * r + tol


@given(spectrum_and_k(), st.floats(-100, 100))
def test_sigma_k_shift_invariant(sk, c):
    s, k = sk
    assert sigma_k(s + c, k) == pytest.approx(sigma_k(s, k), abs=1e-9 * (1 + rho(s) + abs(c)))


@given(spectrum_and_k(), st.floats(-50, 50))
def test_homogeneity(sk, c):
    s, k = sk
    scaled = Spectrum(c * s.values)
    assert sigma_k(scaled, k) == pytest.approx(abs(c) * sigma_k(s, k), rel=1e-9, abs=1e-9)
    assert rho(scaled) == pytest.approx(abs(c) * rho(s), rel=1e-12, abs=1e-12)


@settings(max_examples=50)
@given(spectra)
def test_sigma_k_monotone_in_k(s):
    vals = [sigma_k(s, k) for k in range(1, s.n + 1)]
    assert all(b >= a - 1e-9 * (1 + rho(s)) for a, b in zip(vals, vals[1:]))


# -- generators -----------------------------------------------------------


@pytest.mark.parametrize("gen", [gen_goe, gen_gue])
def test_gaussian_ensembles(gen):
    a, b = gen(8, 3), gen(8, 3)
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, gen(8, 4).data)
    assert gen(1, 0).data.shape == (1, 1)
    assert np.array_equal(a.data, a.data.conj().T)


def test_goe_semicircle_support():
    vals = eigenvalues_sorted(gen_goe(256, 1)).values
    assert np.mean(np.abs(vals) <= 2.5) >= 0.99


def test_gue_is_complex():
    assert gen_gue(4, 0).field == "complex"


def test_clustered_examples():
    assert gen_clustered(4, 0.0, 0.0, [10.0], seed=1).values.tolist() == [10.0, 0.0, 0.0, 0.0]
    s = gen_clustered(50, 1.0, 0.01, [5.0, -3.0], seed=2)
    assert s.values[0] == 5.0 and s.values[-1] == -3.0
    assert np.all(np.abs(s.values[1:-1] - 1.0) <= 0.01)
    with pytest.raises(InputError):
        gen_clustered(1, 0.0, 0.1, [1.0, 2.0])


def test_harmonic_dimension_counts():
    assert [harmonic_dimension(2, l) for l in range(5)] == [1, 3, 5, 7, 9]
    # S^3: (l + 1)^2
    assert [harmonic_dimension(3, l) for l in range(5)] == [1, 4, 9, 16, 25]


def test_sphere_laplacian_examples():
    assert gen_sphere_laplacian(2, 1).values.tolist() == [0.0, -2.0, -2.0, -2.0]
    s = gen_sphere_laplacian(2, 2)
    assert np.count_nonzero(s.values == -6.0) == 5
    for d in (2, 3, 7):
        assert gen_sphere_laplacian(d, 0).values.tolist() == [0.0]
    with pytest.raises(InputError):
        gen_sphere_laplacian(1, 2)
