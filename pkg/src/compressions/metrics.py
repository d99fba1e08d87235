"""Finite atomic probability measures on the line and their distances.

Both distances are exact for atomic measures: the Kantorovich-Rubinstein
distance is the integral of ``|F_mu - F_nu|`` over the merged breakpoints, and
the Kolmogorov distance is the largest CDF gap at an atom (CDFs are
right-continuous).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InputError

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.atoms, dtype=float)
        w = np.ascontiguousarray(self.weights, dtype=float)
        if x.ndim != 1 or x.shape != w.shape or x.size == 0:
            raise InputError("atoms and weights must be nonempty 1-D arrays of equal length")
        if not np.all(np.isfinite(x)):
            raise InputError("atoms must be finite")
        if np.any(np.diff(x) <= 0):
            raise InputError("atoms must be strictly increasing")
        if np.any(w <= 0):
            raise InputError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise InputError(f"weights sum to {w.sum()!r}, not 1")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "atoms", x)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.atoms.size

    def cdf(self, x):
        """Right-continuous distribution function evaluated at ``x``."""
        cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        return cum[np.searchsorted(self.atoms, x, side="right")]

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.weights))

    def pushforward(self, scale: float = 1.0, shift: float = 0.0) -> AtomicMeasure:
        """Image under ``x -> scale * x + shift``."""
        return make_measure(scale * self.atoms + shift, self.weights)


def make_measure(points, weights=None) -> AtomicMeasure:
    """Atomic measure from points (exact duplicates merged), weights normalized."""
    x = np.asarray(points, dtype=float).ravel()
    if x.size == 0:
        raise InputError("a measure needs at least one point")
    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape != x.shape:
            raise InputError("weights and points differ in length")
        if np.any(~(w > 0)):
            raise InputError("weights must be positive")
    atoms, inverse = np.unique(x, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=w, minlength=atoms.size)
    return AtomicMeasure(atoms, merged / merged.sum())


def dirac(x: float) -> AtomicMeasure:
    return AtomicMeasure(np.array([float(x)]), np.array([1.0]))


def w1(mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    """Kantorovich-Rubinstein (L1-Wasserstein) distance."""
    return kernels.w1_cdf(mu.atoms, mu.weights, nu.atoms, nu.weights)


def kolmogorov(mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    """Kolmogorov distance ``sup |F_mu - F_nu|``."""
    return kernels.kolmogorov_cdf(mu.atoms, mu.weights, nu.atoms, nu.weights)


def w1_equal_atoms(xs, ys) -> float:
    """Mean absolute difference under the order-matched pairing of ``xs`` and ``ys``.

    Equal to :func:`w1` between the uniform measures on ``xs`` and ``ys``.
    """
    xs = np.sort(np.asarray(xs, dtype=float))
    ys = np.sort(np.asarray(ys, dtype=float))
    if xs.shape != ys.shape or xs.ndim != 1 or xs.size == 0:
        raise InputError("w1_equal_atoms needs two nonempty sequences of equal length")
    return kernels.w1_matched(xs, ys)


def pool(measures) -> AtomicMeasure:
    """Uniform mixture of the given measures."""
    measures = list(measures)
    if not measures:
        raise InputError("cannot pool an empty collection")
    atoms = np.concatenate([m.atoms for m in measures])
    weights = np.concatenate([m.weights for m in measures])
    return make_measure(atoms, weights)


def format_float(x: float) -> str:
    """Shortest representation that round-trips to the same double."""
    return repr(float(x))


def write_measure_csv(mu: AtomicMeasure, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("atom,weight\n")
        for a, w in zip(mu.atoms, mu.weights):
            fh.write(f"{format_float(a)},{format_float(w)}\n")


def read_measure_csv(path) -> AtomicMeasure:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "atom,weight":
            raise InputError(f"{path}: expected header 'atom,weight', got {header!r}")
        atoms, weights = [], []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                a, w = line.split(",")
                atoms.append(float(a))
                weights.append(float(w))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: malformed row {line.strip()!r}") from exc
    return AtomicMeasure(np.array(atoms), np.array(weights))
