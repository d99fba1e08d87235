"""Spectral measures of compressions of self-adjoint operators to random subspaces."""

from ._backend import BACKEND
from .errors import InputError, InsufficientSamplesError, UndefinedRatioError
from .metrics import AtomicMeasure, kolmogorov, make_measure, pool, w1, w1_equal_atoms
from .operators import (
    HermitianMatrix,
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
from .subspace import (
    CoordinateSet,
    Frame,
    compress_matrix,
    compress_spectrum,
    grassmann_distance,
    principal_submatrix,
    sample_coordinate_set,
    sample_haar_frame,
)

__version__ = "0.1.0"
