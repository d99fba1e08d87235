"""Pure-Python/NumPy kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``COMPRESSIONS_PURE_PYTHON`` is set.

All atom arrays are sorted ascending; repeated atoms are allowed.
"""

import math

import numpy as np


def _merged_cdfs(xa, wa, xb, wb):
    grid = np.concatenate((xa, xb))
    grid.sort(kind="mergesort")
    fa = np.concatenate(([0.0], np.cumsum(wa)))[np.searchsorted(xa, grid, side="right")]
    fb = np.concatenate(([0.0], np.cumsum(wb)))[np.searchsorted(xb, grid, side="right")]
    return grid, fa, fb


def w1_cdf(xa, wa, xb, wb):
    """L1 norm of the CDF difference of two atomic measures."""
    grid, fa, fb = _merged_cdfs(xa, wa, xb, wb)
    return float(np.sum(np.abs(fa[:-1] - fb[:-1]) * np.diff(grid)))


def kolmogorov_cdf(xa, wa, xb, wb):
    """Sup norm of the CDF difference, evaluated at every atom."""
    _, fa, fb = _merged_cdfs(xa, wa, xb, wb)
    return float(np.max(np.abs(fa - fb)))


def w1_matched(xs, ys):
    return float(np.mean(np.abs(np.asarray(xs) - np.asarray(ys))))


def topk_sq_dev(v, k, lam):
    """Sum of the k largest (v_j - lam)**2 for v sorted descending."""
    i, j = 0, len(v) - 1
    total = 0.0
    for _ in range(k):
        top = v[i] - lam
        bot = v[j] - lam
        if top * top >= bot * bot:
            total += top * top
            i += 1
        else:
            total += bot * bot
            j -= 1
    return total


def sigma_k_sq(v, k):
    """Minimum over lam of topk_sq_dev(v, k, lam).

    Evaluates every stationary point (mean of an end-split) and every
    breakpoint of the piecewise quadratic, then cross-checks with a
    ternary search on the convex objective.
    """
    v = [float(x) for x in v]
    n = len(v)
    prefix = [0.0]
    for x in v:
        prefix.append(prefix[-1] + x)
    best = math.inf
    for a in range(k + 1):
        lam = (prefix[a] + prefix[n] - prefix[n - k + a]) / k
        best = min(best, topk_sq_dev(v, k, lam))
    for a in range(1, k + 1):
        lam = 0.5 * (v[a - 1] + v[n - k + a - 1])
        best = min(best, topk_sq_dev(v, k, lam))

    lo, hi = v[n - 1], v[0]
    width = 1e-12 * (1.0 + 0.5 * (hi - lo))
    for _ in range(400):
        if hi - lo <= width:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if topk_sq_dev(v, k, m1) <= topk_sq_dev(v, k, m2):
            hi = m2
        else:
            lo = m1
    for lam in (lo, hi, 0.5 * (lo + hi)):
        best = min(best, topk_sq_dev(v, k, lam))
    return best


def jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic Jacobi on a real symmetric matrix; returns (diagonal, sweeps)."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    sweeps = 0
    for sweeps in range(max_sweeps + 1):
        off = math.sqrt(float(np.sum((a - np.diag(np.diag(a))) ** 2)))
        if off <= tol or sweeps == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.diag(a).copy(), sweeps
