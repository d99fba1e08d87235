"""Compiled and pure-Python kernels implement the same contracts."""

import numpy as np
import pytest

from compressions import _backend, _fallback

ckernels = pytest.importorskip("compressions._ckernels")


def _random_measure(rng, size, ties=False):
    x = rng.normal(size=size)
    if ties:
        x = np.round(x, 1)
    x = np.sort(x)
    w = rng.random(size) + 0.1
    return x, w / w.sum()


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
    assert _backend.kernels in (_fallback, ckernels)


@pytest.mark.parametrize("ties", [False, True])
def test_transport_kernels_agree(rng, ties):
    for _ in range(200):
        xa, wa = _random_measure(rng, rng.integers(1, 12), ties)
        xb, wb = _random_measure(rng, rng.integers(1, 40), ties)
        assert ckernels.w1_cdf(xa, wa, xb, wb) == pytest.approx(_fallback.w1_cdf(xa, wa, xb, wb), abs=1e-13)
        assert ckernels.kolmogorov_cdf(xa, wa, xb, wb) == pytest.approx(
            _fallback.kolmogorov_cdf(xa, wa, xb, wb), abs=1e-13
        )


def test_matched_kernel_agrees(rng):
    xs, ys = np.sort(rng.normal(size=33)), np.sort(rng.normal(size=33))
    assert ckernels.w1_matched(xs, ys) == pytest.approx(_fallback.w1_matched(xs, ys), rel=1e-14)


def test_sigma_kernels_agree(rng):
    for _ in range(100):
        n = int(rng.integers(1, 30))
        v = np.sort(rng.normal(size=n))[::-1].copy()
        k = int(rng.integers(1, n + 1))
        assert ckernels.sigma_k_sq(v, k) == pytest.approx(_fallback.sigma_k_sq(v, k), rel=1e-12, abs=1e-15)
        lam = float(rng.normal())
        assert ckernels.topk_sq_dev(v, k, lam) == pytest.approx(_fallback.topk_sq_dev(v, k, lam), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 7, 16])
def test_jacobi_kernels_agree_with_lapack(backend, rng, n):
    g = rng.normal(size=(n, n))
    a = (g + g.T) / 2
    vals, sweeps = backend.jacobi_eigenvalues(a, 1e-13 * np.linalg.norm(a), 30)
    assert sweeps < 30
    np.testing.assert_allclose(np.sort(vals), np.linalg.eigvalsh(a), atol=1e-12 * (1 + np.abs(a).max()))


def test_jacobi_respects_sweep_cap(backend, rng):
    g = rng.normal(size=(12, 12))
    _, sweeps = backend.jacobi_eigenvalues(g + g.T, 0.0, 2)
    assert sweeps == 2


@pytest.mark.parametrize("flag, expected", [("1", "python"), ("0", "cython")])
def test_environment_switch_selects_backend(flag, expected):
    import os
    import subprocess
    import sys

    env = {**os.environ, "COMPRESSIONS_PURE_PYTHON": flag}
    out = subprocess.run(
        [sys.executable, "-c", "import compressions; print(compressions.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.strip()
    assert out == expected
