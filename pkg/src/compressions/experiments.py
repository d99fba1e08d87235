"""Monte Carlo estimates for spectral measures of random compressions.

Every random draw comes from a per-sample stream keyed by
``(master seed, label, sample index)``, so per-sample results do not depend
on how the index range is split across worker processes.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InputError, InsufficientSamplesError, UndefinedRatioError
from .metrics import AtomicMeasure, kolmogorov, make_measure, w1, w1_equal_atoms
from .operators import HermitianMatrix, Spectrum, eigenvalues_sorted, rho, sigma_k
from .subspace import (
    compress_matrix,
    compress_spectrum,
    grassmann_distance,
    principal_submatrix,
    sample_coordinate_set,
    sample_haar_frame,
)

LIPSCHITZ_REL_TOL = 1e-8
# absolute rounding floor, in units of max |eigenvalue|
LIPSCHITZ_ABS_TOL = 1e-12
BRIDGE_TOL = 1e-10
MIN_EXCEEDANCES = 10
QUANTILES = (0.5, 0.9, 0.99)

Source = Union[Spectrum, HermitianMatrix]


@dataclass(frozen=True)
class ExperimentConfig:
    source: Source
    k: int
    n_samples: int = 400
    n_reference: int = 2000
    n_pairs: int = 1000
    seed: int = 0
    field: str = "real"
    model: str = "haar"
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.source, (Spectrum, HermitianMatrix)):
            raise InputError("source must be a Spectrum or a HermitianMatrix")
        if not 1 <= self.k <= self.n:
            raise InputError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if min(self.n_samples, self.n_reference, self.n_pairs) < 1:
            raise InputError("sample counts must be positive")
        if self.model not in ("haar", "coordinate"):
            raise InputError(f"unknown subspace model {self.model!r}")
        if self.field not in ("real", "complex"):
            raise InputError(f"unknown field {self.field!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise InputError("seed must be a nonnegative integer")

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def frame_field(self) -> str:
        if isinstance(self.source, HermitianMatrix) and self.source.field == "complex":
            return "complex"
        return self.field

    def spectrum(self) -> Spectrum:
        if isinstance(self.source, Spectrum):
            return self.source
        return eigenvalues_sorted(self.source)


def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "little")


def sample_stream(seed: int, label: str, index: int) -> np.random.Generator:
    """Independent generator for one sample of one labelled experiment."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_label_key(label), int(index)))
    return np.random.default_rng(ss)


def _sample_frame(cfg, rng):
    return sample_haar_frame(cfg.n, cfg.k, cfg.frame_field, rng)


def _compress(cfg, frame):
    if isinstance(cfg.source, Spectrum):
        return compress_spectrum(cfg.source, frame)
    return compress_matrix(cfg.source, frame)


def compression_eigenvalues(cfg: ExperimentConfig, rng) -> np.ndarray:
    """Ascending eigenvalues of one random compression under ``cfg.model``."""
    if cfg.model == "haar":
        return eigenvalues_sorted(_compress(cfg, _sample_frame(cfg, rng))).values[::-1].copy()
    coords = sample_coordinate_set(cfg.n, cfg.k, rng)
    if isinstance(cfg.source, Spectrum):
        # diagonal operator: principal submatrices are diagonal too
        return np.sort(cfg.source.values[coords.indices])
    return eigenvalues_sorted(principal_submatrix(cfg.source, coords)).values[::-1].copy()


# -- indexed, order-preserving map (serial or process pool) --------------


def _chunk_worker(job):
    func, args, indices = job
    return [func(*args, int(i)) for i in indices]


def _map_indexed(func, args, count, workers):
    if workers <= 1 or count < 2:
        return [func(*args, i) for i in range(count)]
    chunks = [c for c in np.array_split(np.arange(count), 4 * workers) if c.size]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_chunk_worker, [(func, args, c) for c in chunks])
        return [x for part in parts for x in part]


def _reference_sample(cfg, label, i):
    return compression_eigenvalues(cfg, sample_stream(cfg.seed, label, i))


def reference_samples(cfg: ExperimentConfig, label: str = "reference") -> np.ndarray:
    """``n_reference x k`` array of compression spectra (ascending rows)."""
    rows = _map_indexed(_reference_sample, (cfg, label), cfg.n_reference, cfg.workers)
    return np.vstack(rows)


def estimate_mean_measure(cfg: ExperimentConfig, samples=None) -> AtomicMeasure:
    """Pool of ``n_reference`` compression spectral distributions."""
    if samples is None:
        samples = reference_samples(cfg)
    return make_measure(np.asarray(samples).ravel())


def half_pool_distance(samples) -> float:
    """W1 distance between the pools of the two halves of the reference samples."""
    samples = np.asarray(samples)
    if samples.shape[0] < 2:
        return float("nan")
    h = samples.shape[0] // 2
    return w1(make_measure(samples[:h].ravel()), make_measure(samples[h:].ravel()))


# -- distance statistics --------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistStats:
    samples: np.ndarray
    mean: float
    stderr: float
    sd: float
    quantiles: dict
    count: int

    @classmethod
    def from_samples(cls, samples) -> DistStats:
        x = np.asarray(samples, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise InputError("need a nonempty 1-D sample")
        n = x.size
        mean = math.fsum(x) / n
        # mean of n identical doubles can round outside [min, max]
        mean = min(max(mean, float(x.min())), float(x.max()))
        sd = math.sqrt(math.fsum((x - mean) ** 2) / (n - 1)) if n > 1 else 0.0
        qs = {q: float(v) for q, v in zip(QUANTILES, np.quantile(x, QUANTILES))}
        x = x.copy()
        x.setflags(write=False)
        return cls(x, mean, sd / math.sqrt(n), sd, qs, n)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "stderr": self.stderr,
            "sd": self.sd,
            "min": float(self.samples.min()),
            "max": float(self.samples.max()),
            "quantiles": {str(q): v for q, v in self.quantiles.items()},
        }


_METRICS = {"w1": w1, "kolmogorov": kolmogorov}


def _distance_sample(cfg, label, ref, metric, i):
    vals = compression_eigenvalues(cfg, sample_stream(cfg.seed, label, i))
    return _METRICS[metric](make_measure(vals), ref)


def distance_statistics(
    cfg: ExperimentConfig, reference: AtomicMeasure, metric: str = "w1"
) -> DistStats:
    """``n_samples`` distances from fresh compression spectra to ``reference``.

    Draws use the ``"distance"`` label, disjoint from the reference streams.
    """
    if metric not in _METRICS:
        raise InputError(f"unknown metric {metric!r}")
    d = _map_indexed(_distance_sample, (cfg, "distance", reference, metric), cfg.n_samples, cfg.workers)
    return DistStats.from_samples(d)


def theorem_ratio(stats: DistStats, s: Spectrum, k: int) -> float:
    """Mean W1 divided by ``sigma_k^(4/7) rho^(3/7) / (k n)^(2/7)``."""
    r = rho(s)
    if not r > 0:
        raise UndefinedRatioError("scalar operator: distance and bound both vanish")
    sk = sigma_k(s, k)
    return stats.mean * (k * s.n) ** (2 / 7) / (sk ** (4 / 7) * r ** (3 / 7))


@dataclass(frozen=True, eq=False)
class MeanDistanceReport:
    stats: DistStats
    metric: str
    n: int
    k: int
    rho: float
    sigma_k: float
    ratio: float
    half_pool_w1: float
    model: str

    def to_dict(self) -> dict:
        return {
            "kind": "mean-distance",
            "metric": self.metric,
            "model": self.model,
            "n": self.n,
            "k": self.k,
            "rho": self.rho,
            "sigma_k": self.sigma_k,
            "theorem_ratio": self.ratio,
            "reference_half_pool_w1": self.half_pool_w1,
            "stats": self.stats.to_dict(),
        }


def mean_distance(cfg: ExperimentConfig, metric: str = "w1") -> MeanDistanceReport:
    """Distance statistics plus the normalized ratio against the mean-bound shape."""
    samples = reference_samples(cfg)
    ref = estimate_mean_measure(cfg, samples)
    stats = distance_statistics(cfg, ref, metric)
    s = cfg.spectrum()
    r = rho(s)
    try:
        ratio = theorem_ratio(stats, s, cfg.k)
    except UndefinedRatioError:
        ratio = float("nan")
    return MeanDistanceReport(
        stats, metric, cfg.n, cfg.k, r, sigma_k(s, cfg.k), ratio, half_pool_distance(samples), cfg.model
    )


# -- tail profile ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TailCurve:
    """Exceedance curve ``q_j = P[d >= center + t_j]`` with a subgaussian fit.

    The fit is ``-log q = intercept + alpha * t**2`` by weighted least
    squares over grid points with at least ``MIN_EXCEEDANCES`` exceedances.
    ``center`` is the empirical mean, not a theoretical bound.
    """

    grid: np.ndarray
    q: np.ndarray
    counts: np.ndarray
    retained: np.ndarray
    center: float
    alpha: float
    intercept: float
    r_squared: float
    n: int

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "centering": "empirical mean",
            "alpha": self.alpha,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "n": self.n,
            "retained_points": int(self.retained.sum()),
            "grid": [float(t) for t in self.grid],
            "q": [float(v) for v in self.q],
        }


def tail_profile(stats: DistStats, grid) -> TailCurve:
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t < 0) or np.any(np.diff(t) < 0):
        raise InputError("grid must be a nondecreasing sequence of nonnegative offsets")
    x = stats.samples
    n = x.size
    center = stats.mean
    counts = np.array([np.count_nonzero(x >= center + tj) for tj in t])
    q = counts / n
    keep = counts >= MIN_EXCEEDANCES
    if not keep.any():
        raise InsufficientSamplesError(
            f"insufficient samples: no grid point has {MIN_EXCEEDANCES} exceedances out of {n}"
        )
    alpha = intercept = 0.0
    r2 = float("nan")
    if keep.sum() >= 2:
        xs = t[keep] ** 2
        ys = -np.log(q[keep])
        w = counts[keep] / np.maximum(1.0 - q[keep], 1.0 / n)
        sw = w.sum()
        xm = np.dot(w, xs) / sw
        ym = np.dot(w, ys) / sw
        sxx = np.dot(w, (xs - xm) ** 2)
        if sxx > 0:
            slope = np.dot(w, (xs - xm) * (ys - ym)) / sxx
            intercept = float(ym - slope * xm)
            resid = ys - (intercept + slope * xs)
            stot = np.dot(w, (ys - ym) ** 2)
            r2 = float(1.0 - np.dot(w, resid**2) / stot) if stot > 0 else 1.0
            alpha = max(float(slope), 0.0)
    return TailCurve(t, q, counts, keep, center, alpha, intercept, r2, n)


# -- Lipschitz bound ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LipschitzReport:
    pairs: int
    max_ratio: float
    violations: int
    sigma_k: float
    ratios: np.ndarray = field(repr=False)
    lhs: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "kind": "lipschitz",
            "pairs": self.pairs,
            "max_ratio": self.max_ratio,
            "violations": self.violations,
            "sigma_k": self.sigma_k,
            "tolerance": LIPSCHITZ_REL_TOL,
            "absolute_tolerance": LIPSCHITZ_ABS_TOL,
        }


def lipschitz_pair(s: Source, qe, qf, sigma: float):
    """``(d1(mu_E, mu_F), (2 sigma_k / sqrt k) d(E, F))`` for one pair of frames."""
    if isinstance(s, Spectrum):
        te, tf = compress_spectrum(s, qe), compress_spectrum(s, qf)
    else:
        te, tf = compress_matrix(s, qe), compress_matrix(s, qf)
    lhs = w1_equal_atoms(eigenvalues_sorted(te).values, eigenvalues_sorted(tf).values)
    rhs = 2.0 * sigma / math.sqrt(qe.k) * grassmann_distance(qe, qf)
    return lhs, rhs


def _ratio(lhs, rhs, floor):
    if lhs <= floor:
        return 0.0
    return lhs / rhs if rhs > 0 else math.inf


def _pair_sample(cfg, sigma, i):
    rng = sample_stream(cfg.seed, "pair", i)
    qe = _sample_frame(cfg, rng)
    qf = _sample_frame(cfg, rng)
    return lipschitz_pair(cfg.source, qe, qf, sigma)


def lipschitz_check(cfg: ExperimentConfig) -> LipschitzReport:
    """Both sides of the Lipschitz bound on ``n_pairs`` independent Haar pairs."""
    if cfg.model != "haar":
        raise InputError("the Lipschitz check uses Haar-random subspaces")
    s = cfg.spectrum()
    sig = sigma_k(s, cfg.k)
    floor = LIPSCHITZ_ABS_TOL * max(abs(s.values[0]), abs(s.values[-1]), 1.0)
    out = _map_indexed(_pair_sample, (cfg, sig), cfg.n_pairs, cfg.workers)
    lhs = np.array([a for a, _ in out])
    rhs = np.array([b for _, b in out])
    ratios = np.array([_ratio(a, b, floor) for a, b in out])
    viol = int(np.count_nonzero(lhs > rhs * (1.0 + LIPSCHITZ_REL_TOL) + floor))
    return LipschitzReport(cfg.n_pairs, float(ratios.max()), viol, sig, ratios, lhs, rhs)


# -- W1 versus Kolmogorov -------------------------------------------------


@dataclass(frozen=True, eq=False)
class BridgeReport:
    pairs: int
    rho: float
    max_excess: float
    violations: int
    w1: np.ndarray = field(repr=False)
    kolmogorov: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "kind": "metric-bridge",
            "pairs": self.pairs,
            "rho": self.rho,
            "max_excess": self.max_excess,
            "violations": self.violations,
            "tolerance": BRIDGE_TOL,
        }


def _bridge_sample(cfg, i):
    rng = sample_stream(cfg.seed, "bridge", i)
    a = make_measure(compression_eigenvalues(cfg, rng))
    b = make_measure(compression_eigenvalues(cfg, rng))
    return w1(a, b), kolmogorov(a, b)


def metric_bridge_check(cfg: ExperimentConfig) -> BridgeReport:
    """``w1 <= 2 rho(T) kolmogorov`` on ``n_pairs`` pairs of compression spectra."""
    r = rho(cfg.spectrum())
    out = np.array(_map_indexed(_bridge_sample, (cfg,), cfg.n_pairs, cfg.workers))
    excess = out[:, 0] - 2.0 * r * out[:, 1]
    return BridgeReport(
        cfg.n_pairs, r, float(excess.max()), int(np.count_nonzero(excess > BRIDGE_TOL)), out[:, 0], out[:, 1]
    )


# -- principal submatrices with explicit constants --------------------------


def cl_mean_bound(k: int) -> float:
    return (13.0 + math.sqrt(8.0) * math.log(k)) / math.sqrt(k)


def cl_tail_bound(k: int, t: float) -> float:
    return 12.0 * math.sqrt(k) * math.exp(-t * math.sqrt(k / 8.0))


@dataclass(frozen=True, eq=False)
class CLReport:
    stats: DistStats
    k: int
    n: int
    mean_bound: float
    mean_pass: bool
    tail: list
    passed: bool

    def to_dict(self) -> dict:
        return {
            "kind": "cl",
            "n": self.n,
            "k": self.k,
            "stats": self.stats.to_dict(),
            "mean_bound": self.mean_bound,
            "mean_pass": self.mean_pass,
            "tail": self.tail,
            "passed": self.passed,
        }


def cl_check(
    m: HermitianMatrix, k: int, n_samples: int, seed: int, n_reference: int = 2000, grid=None, workers: int = 1
) -> CLReport:
    """Kolmogorov distance of random principal submatrices against explicit bounds.

    A point passes when the empirical value is at most the bound plus three
    standard errors.
    """
    cfg = ExperimentConfig(
        m, k, n_samples=n_samples, n_reference=n_reference, seed=seed, model="coordinate", workers=workers
    )
    ref = estimate_mean_measure(cfg)
    stats = distance_statistics(cfg, ref, "kolmogorov")
    mb = cl_mean_bound(k)
    mean_pass = stats.mean <= mb + 3.0 * stats.stderr
    if grid is None:
        grid = np.linspace(0.0, 2.0, 21)
    base = 1.0 / math.sqrt(k)
    tail = []
    for t in grid:
        q = float(np.mean(stats.samples >= base + t))
        se = math.sqrt(q * (1.0 - q) / stats.count)
        b = cl_tail_bound(k, float(t))
        tail.append({"t": float(t), "q": q, "stderr": se, "bound": b, "pass": bool(q <= b + 3.0 * se)})
    passed = bool(mean_pass and all(p["pass"] for p in tail))
    return CLReport(stats, k, m.n, mb, bool(mean_pass), tail, passed)


# -- rotation-invariance shortcut ---------------------------------------------


@dataclass(frozen=True, eq=False)
class InvarianceReport:
    diagonal: DistStats
    dense: DistStats
    difference: float
    combined_stderr: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "kind": "invariance",
            "diagonal": self.diagonal.to_dict(),
            "dense": self.dense.to_dict(),
            "difference": self.difference,
            "combined_stderr": self.combined_stderr,
            "passed": self.passed,
        }


def conjugated_matrix(s: Spectrum, seed: int, conjugation: str = "random") -> HermitianMatrix:
    """``U diag(s) U*`` for a fixed Haar ``U`` (or ``U = I``)."""
    if conjugation == "identity":
        u = np.eye(s.n)
    elif conjugation == "random":
        u = sample_haar_frame(s.n, s.n, "real", sample_stream(seed, "conjugation", 0)).q
    else:
        raise InputError(f"unknown conjugation {conjugation!r}")
    return HermitianMatrix((u * s.values) @ u.T)


def conjugation_invariance_check(
    s: Spectrum,
    k: int,
    seed: int,
    n_samples: int = 2000,
    n_reference: int = 2000,
    conjugation: str = "random",
    workers: int = 1,
) -> InvarianceReport:
    """Compare W1 statistics of the diagonal and the dense representation of ``s``.

    Passes when the means differ by at most four combined standard errors.
    """
    out = []
    for src in (s, conjugated_matrix(s, seed, conjugation)):
        cfg = ExperimentConfig(src, k, n_samples=n_samples, n_reference=n_reference, seed=seed, workers=workers)
        out.append(distance_statistics(cfg, estimate_mean_measure(cfg), "w1"))
    a, b = out
    diff = abs(a.mean - b.mean)
    se = math.hypot(a.stderr, b.stderr)
    return InvarianceReport(a, b, diff, se, bool(diff <= 4.0 * se))


def fluctuation_comparison(s: Spectrum, k: int, seed: int, n_samples: int = 400, n_reference: int = 2000) -> dict:
    """Standard deviation of W1 under Haar versus coordinate subspaces.

    For the coordinate model ``s`` is read as a diagonal matrix. Reported as
    data; no ordering is asserted.
    """
    out = {"n": s.n, "k": k, "rho": rho(s), "sigma_k_over_sqrt_k": sigma_k(s, k) / math.sqrt(k)}
    for model in ("haar", "coordinate"):
        cfg = ExperimentConfig(s, k, n_samples=n_samples, n_reference=n_reference, seed=seed, model=model)
        st = distance_statistics(cfg, estimate_mean_measure(cfg), "w1")
        out[f"{model}_sd"] = st.sd
        out[f"{model}_mean"] = st.mean
    return out
