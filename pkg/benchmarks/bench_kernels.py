"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]

Workloads mirror the hot paths of a Monte Carlo run: a k-atom sample measure
against a pooled reference of M*k atoms (W1 and Kolmogorov), sigma_k of a
spectrum, and Jacobi eigenvalues of a small dense matrix.
"""

import argparse
import timeit

import numpy as np

from compressions import _fallback

try:
    from compressions import _ckernels
except ImportError:
    _ckernels = None


def workloads(rng):
    xa = np.sort(rng.normal(size=64))
    wa = np.full(64, 1 / 64)
    xb = np.sort(rng.normal(size=128_000))
    wb = np.full(xb.size, 1 / xb.size)
    v = np.sort(rng.normal(size=1024))[::-1].copy()
    xs, ys = np.sort(rng.normal(size=1024)), np.sort(rng.normal(size=1024))
    g = rng.normal(size=(32, 32))
    a = (g + g.T) / 2
    tol = 1e-13 * np.linalg.norm(a)
    return {
        "w1_cdf (64 vs 128000 atoms)": lambda m: m.w1_cdf(xa, wa, xb, wb),
        "kolmogorov_cdf (64 vs 128000 atoms)": lambda m: m.kolmogorov_cdf(xa, wa, xb, wb),
        "w1_matched (1024 atoms)": lambda m: m.w1_matched(xs, ys),
        "sigma_k_sq (n=1024, k=64)": lambda m: m.sigma_k_sq(v, 64),
        "jacobi_eigenvalues (32 x 32)": lambda m: m.jacobi_eigenvalues(a, tol, 30),
    }


def best_time(func, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(func, number=1), 1e-7)))
    return min(timeit.repeat(func, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, call in workloads(rng).items():
        tp = best_time(lambda: call(_fallback), args.repeat)
        tc = best_time(lambda: call(_ckernels), args.repeat)
        print(f"{name:40s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
