import importlib

import numpy as np
import pytest

from compressions import _fallback

_BACKENDS = [pytest.param(_fallback, id="python")]
try:
    _BACKENDS.append(pytest.param(importlib.import_module("compressions._ckernels"), id="cython"))
except ImportError:
    pass


@pytest.fixture(params=_BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def grid_sigma_k(values, k, step=1e-6):
    """Dense-grid minimization of the top-k root-sum-square deviation."""
    v = np.sort(np.asarray(values, dtype=float))
    lo, hi = v[0], v[-1]
    if hi == lo:
        return 0.0
    best = np.inf
    grid = np.arange(lo, hi + step, step)
    for chunk in np.array_split(grid, max(1, grid.size // 200_000)):
        dev = (v[None, :] - chunk[:, None]) ** 2
        top = -np.partition(-dev, k - 1, axis=1)[:, :k]
        best = min(best, top.sum(axis=1).min())
    return float(np.sqrt(best))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
