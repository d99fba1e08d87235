"""Random subspaces, compressions onto them, and the Grassmann distance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .operators import HermitianMatrix, Spectrum

GRAM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Frame:
    """An ``n x k`` matrix with orthonormal columns spanning a subspace ``E``.

    ``q.conj().T @ x`` gives the coordinates of the projection of ``x`` onto
    ``E`` in this basis.
    """

    q: np.ndarray
    validate: bool = True

    def __post_init__(self):
        q = np.asarray(self.q)
        if q.ndim != 2 or not 1 <= q.shape[1] <= q.shape[0]:
            raise InputError(f"frame must be n x k with 1 <= k <= n, got {q.shape}")
        if self.validate:
            gram = q.conj().T @ q
            dev = np.max(np.abs(gram - np.eye(q.shape[1])))
            if not dev <= GRAM_TOL:
                raise InputError(f"columns are not orthonormal (max Gram deviation {dev:.3g})")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def k(self) -> int:
        return self.q.shape[1]

    @property
    def field(self) -> str:
        return "complex" if np.iscomplexobj(self.q) else "real"

    def project(self, x):
        return self.q.conj().T @ x


@dataclass(frozen=True, eq=False)
class CoordinateSet:
    """``k`` distinct coordinate indices out of ``n`` (0-based, increasing)."""

    n: int
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp).ravel()
        if idx.size == 0 or np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.n:
            raise InputError(f"indices must be strictly increasing within [0, {self.n})")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return self.indices.size


def _check_dims(n, k):
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got n={n}, k={k}")


def sample_haar_frame(n: int, k: int, field: str = "real", rng=None) -> Frame:
    """Orthonormal frame whose span is uniform on the Grassmannian.

    Thin QR of a Gaussian matrix; columns are rephased by the signs (phases)
    of the diagonal of R so the frame itself is Haar-distributed.
    """
    _check_dims(n, k)
    rng = np.random.default_rng(rng)
    if field == "real":
        g = rng.standard_normal((n, k))
    elif field == "complex":
        g = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / math.sqrt(2.0)
    else:
        raise InputError(f"unknown field {field!r}")
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    phase = d / np.abs(d) if field == "complex" else np.sign(d)
    return Frame(q * phase, validate=False)


def sample_coordinate_set(n: int, k: int, rng=None) -> CoordinateSet:
    """Uniform ``k``-subset of ``range(n)`` by partial Fisher-Yates shuffle."""
    _check_dims(n, k)
    rng = np.random.default_rng(rng)
    perm = np.arange(n)
    draws = rng.integers(np.arange(k), n)
    for i, j in enumerate(draws):
        perm[i], perm[j] = perm[j], perm[i]
    return CoordinateSet(n, np.sort(perm[:k]))


def compress_spectrum(s: Spectrum, frame: Frame) -> HermitianMatrix:
    """``Q* diag(s) Q`` without forming the ``n x n`` diagonal matrix."""
    if frame.n != s.n:
        raise InputError(f"frame ambient dimension {frame.n} != spectrum size {s.n}")
    q = frame.q
    return HermitianMatrix(q.conj().T @ (s.values[:, None] * q))


def compress_matrix(m: HermitianMatrix, frame: Frame) -> HermitianMatrix:
    """``Q* M Q``, the matrix of the compression in the frame's basis."""
    if frame.n != m.n:
        raise InputError(f"frame ambient dimension {frame.n} != matrix dimension {m.n}")
    q = frame.q
    return HermitianMatrix(q.conj().T @ (m.data @ q))


def principal_submatrix(m: HermitianMatrix, c: CoordinateSet) -> HermitianMatrix:
    if c.n != m.n:
        raise InputError(f"coordinate set is for n={c.n}, matrix has n={m.n}")
    return HermitianMatrix(m.data[np.ix_(c.indices, c.indices)])


def principal_angle_cosines(qe: Frame, qf: Frame) -> np.ndarray:
    """Cosines of the principal angles, clipped to [0, 1]."""
    if (qe.n, qe.k, qe.field) != (qf.n, qf.k, qf.field):
        raise InputError("frames differ in ambient dimension, subspace dimension or field")
    s = np.linalg.svd(qe.q.conj().T @ qf.q, compute_uv=False)
    return np.clip(s, 0.0, 1.0)


def grassmann_distance(qe: Frame, qf: Frame) -> float:
    """``inf sqrt(sum ||e_i - f_i||^2)`` over orthonormal bases of the two spans.

    The infimum equals ``sqrt(2 * sum(1 - cos theta_i))`` over the principal
    angles and is attained at the Procrustes alignment ``W = U V*`` of
    ``Q_F* Q_E = U S V*``; the residual ``Q_E - Q_F W`` is evaluated directly
    because ``1 - cos`` loses all precision for nearly equal subspaces.
    """
    if (qe.n, qe.k, qe.field) != (qf.n, qf.k, qf.field):
        raise InputError("frames differ in ambient dimension, subspace dimension or field")
    u, _, vh = np.linalg.svd(qf.q.conj().T @ qe.q)
    return float(np.linalg.norm(qe.q - qf.q @ (u @ vh)))
