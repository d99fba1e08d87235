"""Self-adjoint operators, their spectra, and scalar-distance functionals.

A :class:`Spectrum` is enough to describe an operator for anything that is
invariant under unitary conjugation; a :class:`HermitianMatrix` is needed when
a basis matters (coordinate subspaces).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InputError

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 30


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues ``lambda_1 >= ... >= lambda_n``, counted with multiplicity."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise InputError("a spectrum needs at least one eigenvalue")
        if not np.all(np.isfinite(v)):
            raise InputError("spectrum contains non-finite values")
        v = np.sort(v)[::-1].copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __add__(self, c):
        return Spectrum(self.values + float(c))

    def __mul__(self, c):
        return Spectrum(self.values * float(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Spectrum) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense self-adjoint matrix; symmetrized as ``(A + A*)/2`` on construction."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InputError(f"expected a nonempty square matrix, got shape {a.shape}")
        a = a.astype(complex if np.iscomplexobj(a) else float)
        if not np.all(np.isfinite(a)):
            raise InputError("matrix contains non-finite entries")
        a = 0.5 * (a + a.conj().T)
        if np.iscomplexobj(a):
            a[np.diag_indices_from(a)] = a.diagonal().real
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def field(self) -> str:
        return "complex" if np.iscomplexobj(self.data) else "real"

    @classmethod
    def diagonal(cls, values) -> HermitianMatrix:
        return cls(np.diag(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class ScalarShift:
    """A real multiple of the identity, ``lam * I``."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise InputError("scalar shift must be finite")

    def apply(self, s: Spectrum) -> Spectrum:
        return s + (-self.lam)


def _as_values(s) -> np.ndarray:
    if isinstance(s, Spectrum):
        return s.values
    return Spectrum(s).values


def eigenvalues_sorted(m: HermitianMatrix, method: str = "lapack") -> Spectrum:
    """All eigenvalues of ``m`` in descending order.

    ``method="lapack"`` calls ``numpy.linalg.eigvalsh``; ``method="jacobi"``
    runs the cyclic Jacobi kernel (complex input via its real 2n x 2n
    embedding, whose eigenvalues are those of ``m`` doubled).
    """
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(m)
    if method not in ("lapack", "jacobi"):
        raise InputError(f"unknown eigensolver {method!r}")
    a = m.data
    if not np.any(a[~np.eye(m.n, dtype=bool)]):
        # already diagonal; LAPACK rescaling of tiny norms would perturb it
        return Spectrum(np.diagonal(a).real)
    if method == "lapack":
        return Spectrum(np.linalg.eigvalsh(a))
    if np.iscomplexobj(a):
        x, y = a.real, a.imag
        emb = np.block([[x, -y], [y, x]])
        vals, _ = kernels.jacobi_eigenvalues(emb, JACOBI_REL_TOL * np.linalg.norm(emb), JACOBI_MAX_SWEEPS)
        return Spectrum(np.sort(vals)[::-1][::2])
    vals, _ = kernels.jacobi_eigenvalues(
        np.ascontiguousarray(a), JACOBI_REL_TOL * np.linalg.norm(a), JACOBI_MAX_SWEEPS
    )
    return Spectrum(vals)


def spectral_distribution(s: Spectrum):
    """Uniform probability measure on the eigenvalues, repeated ones merged."""
    from .metrics import make_measure

    return make_measure(_as_values(s))


def rho(s: Spectrum) -> float:
    """Half the spectral diameter, ``(lambda_1 - lambda_n) / 2``."""
    v = _as_values(s)
    return 0.5 * float(v[0] - v[-1])


def ky_fan2(values, k: int) -> float:
    """Root of the sum of the ``k`` largest squared magnitudes of ``values``."""
    mags = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    if not 1 <= k <= mags.size:
        raise InputError(f"k={k} outside [1, {mags.size}]")
    return math.sqrt(math.fsum(mags[:k] ** 2))


def sigma_k(s: Spectrum, k: int) -> float:
    """Distance from ``T`` to the real scalars in the ``(k),2`` Ky Fan norm.

    Minimizes over ``lam`` the root-sum of the ``k`` largest
    ``(lambda_j - lam)**2``.
    """
    v = _as_values(s)
    if not 1 <= k <= v.size:
        raise InputError(f"k={k} outside [1, {v.size}]")
    return math.sqrt(kernels.sigma_k_sq(np.ascontiguousarray(v), int(k)))


def gen_goe(n: int, seed) -> HermitianMatrix:
    """Real symmetric Gaussian matrix scaled so the spectrum fills about [-2, 2]."""
    if n < 1:
        raise InputError("n must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    return HermitianMatrix((g + g.T) / math.sqrt(2.0 * n))


def gen_gue(n: int, seed) -> HermitianMatrix:
    """Complex Hermitian counterpart of :func:`gen_goe`."""
    if n < 1:
        raise InputError("n must be positive")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    return HermitianMatrix((g + g.conj().T) / math.sqrt(2.0 * n))


def gen_clustered(n: int, center: float, spread: float, outliers=(), seed=None) -> Spectrum:
    """``n - len(outliers)`` values uniform on ``center +- spread`` plus the outliers."""
    outliers = [float(x) for x in outliers]
    if n < len(outliers) or n < 1:
        raise InputError("n must be positive and at least the number of outliers")
    if spread < 0:
        raise InputError("spread must be nonnegative")
    rng = np.random.default_rng(seed)
    bulk = center + spread * rng.uniform(-1.0, 1.0, n - len(outliers))
    return Spectrum(np.concatenate((bulk, outliers)))


def harmonic_dimension(d: int, degree: int) -> int:
    """Dimension of degree-``degree`` spherical harmonics on the sphere S^d."""
    return math.comb(degree + d, d) - math.comb(degree + d - 2, d)


def gen_sphere_laplacian(d: int, max_degree: int) -> Spectrum:
    """Laplace-Beltrami spectrum on S^d restricted to degrees ``0..max_degree``.

    Eigenvalue ``-l(l + d - 1)`` appears with the multiplicity of the
    degree-``l`` harmonic space.
    """
    if d < 2 or max_degree < 0:
        raise InputError("need surface dimension >= 2 and max_degree >= 0")
    vals = []
    for deg in range(max_degree + 1):
        vals.extend([float(-deg * (deg + d - 1))] * harmonic_dimension(d, deg))
    return Spectrum(vals)
