# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: 1-D transport merges, sigma_k search, cyclic Jacobi."""

from libc.math cimport fabs, sqrt, INFINITY

import numpy as np


def w1_cdf(const double[::1] xa, const double[::1] wa,
           const double[::1] xb, const double[::1] wb):
    cdef Py_ssize_t na = xa.shape[0], nb = xb.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double fa = 0.0, fb = 0.0, total = 0.0, x, prev = 0.0
    cdef bint started = False
    while i < na or j < nb:
        if j >= nb or (i < na and xa[i] <= xb[j]):
            x = xa[i]
        else:
            x = xb[j]
        if started:
            total += fabs(fa - fb) * (x - prev)
        started = True
        while i < na and xa[i] == x:
            fa += wa[i]
            i += 1
        while j < nb and xb[j] == x:
            fb += wb[j]
            j += 1
        prev = x
    return total


def kolmogorov_cdf(const double[::1] xa, const double[::1] wa,
                   const double[::1] xb, const double[::1] wb):
    cdef Py_ssize_t na = xa.shape[0], nb = xb.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double fa = 0.0, fb = 0.0, best = 0.0, x
    while i < na or j < nb:
        if j >= nb or (i < na and xa[i] <= xb[j]):
            x = xa[i]
        else:
            x = xb[j]
        while i < na and xa[i] == x:
            fa += wa[i]
            i += 1
        while j < nb and xb[j] == x:
            fb += wb[j]
            j += 1
        if fabs(fa - fb) > best:
            best = fabs(fa - fb)
    return best


def w1_matched(const double[::1] xs, const double[::1] ys):
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double total = 0.0
    for i in range(n):
        total += fabs(xs[i] - ys[i])
    return total / n


cdef double _topk(const double[::1] v, Py_ssize_t k, double lam) noexcept nogil:
    cdef Py_ssize_t i = 0, j = v.shape[0] - 1, r
    cdef double top, bot, total = 0.0
    for r in range(k):
        top = v[i] - lam
        bot = v[j] - lam
        if top * top >= bot * bot:
            total += top * top
            i += 1
        else:
            total += bot * bot
            j -= 1
    return total


def topk_sq_dev(const double[::1] v, Py_ssize_t k, double lam):
    return _topk(v, k, lam)


def sigma_k_sq(const double[::1] v, Py_ssize_t k):
    cdef Py_ssize_t n = v.shape[0], a, it
    cdef double[::1] prefix = np.empty(n + 1)
    cdef double best = INFINITY, lam, lo, hi, width, m1, m2, val
    prefix[0] = 0.0
    for a in range(n):
        prefix[a + 1] = prefix[a] + v[a]
    for a in range(k + 1):
        lam = (prefix[a] + prefix[n] - prefix[n - k + a]) / k
        val = _topk(v, k, lam)
        if val < best:
            best = val
    for a in range(1, k + 1):
        lam = 0.5 * (v[a - 1] + v[n - k + a - 1])
        val = _topk(v, k, lam)
        if val < best:
            best = val

    lo = v[n - 1]
    hi = v[0]
    width = 1e-12 * (1.0 + 0.5 * (hi - lo))
    for it in range(400):
        if hi - lo <= width:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if _topk(v, k, m1) <= _topk(v, k, m2):
            hi = m2
        else:
            lo = m1
    for lam in (lo, hi, 0.5 * (lo + hi)):
        val = _topk(v, k, lam)
        if val < best:
            best = val
    return best


def jacobi_eigenvalues(a_in, double tol, int max_sweeps):
    cdef double[:, ::1] a = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0], p, q, r
    cdef int sweeps = 0
    cdef double off, apq, theta, t, c, s, xp, xq
    while True:
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += a[p, q] * a[p, q]
        if sqrt(off) <= tol or sweeps == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for r in range(n):
                    xp = a[r, p]
                    xq = a[r, q]
                    a[r, p] = c * xp - s * xq
                    a[r, q] = s * xp + c * xq
                for r in range(n):
                    xp = a[p, r]
                    xq = a[q, r]
                    a[p, r] = c * xp - s * xq
                    a[q, r] = s * xp + c * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
    return np.array([a[r, r] for r in range(n)]), sweeps
