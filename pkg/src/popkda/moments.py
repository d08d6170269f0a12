"""Class distributions and the raw-moment statistics of two-class problems.

Raw moments ``E[X^j]`` are the stored quantity; covariances of monomials are
assembled from them as ``E[X^(i+j)] - E[X^i] E[X^j]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.stats import qmc

from .multiindex import IndexSet, MultiIndex, degree_range, monomials

MAX_MOMENT_DEGREE = 40


def gaussian_raw_moment_1d(mu: float, var: float, k: int) -> float:
    """``E[X^k]`` for ``X ~ N(mu, var)`` by the three-term recurrence."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    return float(_gaussian_moments_1d(mu, var, k)[k])


def _gaussian_moments_1d(mu: float, var: float, kmax: int) -> np.ndarray:
    m = np.empty(kmax + 1)
    m[0] = 1.0
    if kmax >= 1:
        m[1] = mu
    for k in range(2, kmax + 1):
        m[k] = mu * m[k - 1] + (k - 1) * var * m[k - 2]
    return m


@dataclass(frozen=True, eq=False)
class DiagonalGaussian:
    mean: np.ndarray
    var: np.ndarray
    prior: float = 0.5

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        var = np.atleast_1d(np.asarray(self.var, dtype=float))
        if mean.shape != var.shape or mean.ndim != 1:
            raise ValueError("mean and variance vectors must have equal length")
        if np.any(var <= 0):
            raise ValueError("variances must be positive")
        _check_prior(self.prior)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "var", var)

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def cov(self) -> np.ndarray:
        return np.diag(self.var)

    def moment_table(self, max_degree: int) -> "MomentTable":
        one_d = [_gaussian_moments_1d(m, v, max_degree) for m, v in zip(self.mean, self.var)]
        index = degree_range(self.dim, 0, max_degree)
        values = {}
        for j in index:
            val = 1.0
            for c, e in enumerate(j):
                val *= one_d[c][e]
            values[tuple(j)] = val
        return MomentTable(self.dim, max_degree, values)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.mean + np.sqrt(self.var) * rng.standard_normal((n, self.dim))


@dataclass(frozen=True, eq=False)
class FullGaussian:
    """Gaussian with a full covariance; moments are estimated by randomized QMC."""

    mean: np.ndarray
    cov: np.ndarray
    prior: float = 0.5
    qmc_points: int = 2**14
    qmc_replicates: int = 16
    seed: int = 0

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ValueError("covariance shape does not match mean")
        if not np.allclose(cov, cov.T, atol=1e-12):
            raise ValueError("covariance must be symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("covariance must be positive definite") from None
        _check_prior(self.prior)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.size

    def moment_estimates(self, max_degree: int) -> tuple[dict, dict]:
        """Estimates and standard errors of all moments up to ``max_degree``."""
        index = degree_range(self.dim, 0, max_degree)
        seeds = np.random.SeedSequence(self.seed).spawn(self.qmc_replicates)
        reps = []
        for s in seeds:
            engine = qmc.MultivariateNormalQMC(self.mean, self.cov, seed=np.random.default_rng(s))
            reps.append(monomials(engine.random(self.qmc_points), index).mean(axis=0))
        reps = np.array(reps)
        est = reps.mean(axis=0)
        se = reps.std(axis=0, ddof=1) / np.sqrt(len(reps))
        keys = [tuple(j) for j in index]
        return dict(zip(keys, est)), dict(zip(keys, se))

    def moment_table(self, max_degree: int) -> "MomentTable":
        est, se = self.moment_estimates(max_degree)
        est[(0,) * self.dim] = 1.0
        return MomentTable(self.dim, max_degree, est, se)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.multivariate_normal(self.mean, self.cov, size=n)


@dataclass(frozen=True, eq=False)
class Empirical:
    """A class represented by its sample; moments are sample averages."""

    data: np.ndarray
    prior: float = 0.5

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.shape[0] == 0:
            raise ValueError("empirical class needs at least one observation")
        _check_prior(self.prior)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def mean(self) -> np.ndarray:
        return self.data.mean(axis=0)

    @property
    def cov(self) -> np.ndarray:
        return np.cov(self.data, rowvar=False, bias=True).reshape(self.dim, self.dim)

    def moment_table(self, max_degree: int) -> "MomentTable":
        index = degree_range(self.dim, 0, max_degree)
        avg = monomials(self.data, index).mean(axis=0)
        return MomentTable(self.dim, max_degree, {tuple(j): v for j, v in zip(index, avg)})

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.data[rng.integers(0, self.data.shape[0], size=n)]


ClassSpec = Union[DiagonalGaussian, FullGaussian, Empirical]


def _check_prior(prior: float) -> None:
    if not 0.0 < prior < 1.0:
        raise ValueError(f"class prior must lie in (0, 1), got {prior}")


@dataclass
class MomentTable:
    """Raw moments ``E[X^j]`` of one class for every ``|j| <= max_degree``."""

    p: int
    max_degree: int
    values: dict
    stderr: dict | None = None

    def __getitem__(self, j) -> float:
        return self.values[tuple(j)]

    def vector(self, index: IndexSet) -> np.ndarray:
        if index.max_degree > self.max_degree:
            raise ValueError("index set exceeds the degree of the moment table")
        return np.array([self.values[tuple(j)] for j in index])


def raw_moment(cls: ClassSpec, j) -> float:
    """``E[X^j]`` for one class (QMC estimate for :class:`FullGaussian`)."""
    j = MultiIndex(j)
    if len(j) != cls.dim:
        raise ValueError(f"multi-index length {len(j)} does not match dimension {cls.dim}")
    return cls.moment_table(j.degree)[j]


@dataclass(frozen=True, eq=False)
class TwoClassProblem:
    class1: ClassSpec
    class2: ClassSpec
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if abs(self.class1.prior + self.class2.prior - 1.0) > 1e-12:
            raise ValueError("class priors must sum to one")
        if self.class1.dim != self.class2.dim:
            raise ValueError("classes live in different dimensions")

    @property
    def dim(self) -> int:
        return self.class1.dim

    @property
    def priors(self) -> tuple[float, float]:
        return self.class1.prior, self.class2.prior

    def swapped(self) -> "TwoClassProblem":
        return TwoClassProblem(self.class2, self.class1)

    def moment_tables(self, max_degree: int) -> tuple[MomentTable, MomentTable]:
        if max_degree > MAX_MOMENT_DEGREE:
            raise ValueError(f"moments beyond degree {MAX_MOMENT_DEGREE} are not supported")
        cached = self._cache.get("tables")
        if cached is None or cached[0].max_degree < max_degree:
            cached = (self.class1.moment_table(max_degree), self.class2.moment_table(max_degree))
            self._cache["tables"] = cached
        return cached

    @classmethod
    def from_samples(cls, x1: np.ndarray, x2: np.ndarray) -> "TwoClassProblem":
        """Empirical problem with priors set to the sample class proportions."""
        n1, n2 = len(x1), len(x2)
        pi1 = n1 / (n1 + n2)
        return cls(Empirical(x1, pi1), Empirical(x2, 1.0 - pi1))


@dataclass(frozen=True)
class DeltaVector:
    index: IndexSet
    values: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PooledCovariance:
    index: IndexSet
    matrix: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def delta_vector(problem: TwoClassProblem, index: IndexSet) -> DeltaVector:
    m1, m2 = problem.moment_tables(index.max_degree)
    return DeltaVector(index, m1.vector(index) - m2.vector(index))


def _cross_cov(table: MomentTable, a: IndexSet, b: IndexSet) -> np.ndarray:
    Ea, Eb = table.vector(a), table.vector(b)
    joint = np.array([[table[i + j] for j in b] for i in a])
    return joint - np.outer(Ea, Eb)


def pooled_cross_covariance(problem: TwoClassProblem, a: IndexSet, b: IndexSet) -> np.ndarray:
    """Block ``[pi1 Cov1(X^i, X^j) + pi2 Cov2(X^i, X^j)]`` for ``i in a``, ``j in b``."""
    m1, m2 = problem.moment_tables(a.max_degree + b.max_degree)
    pi1, pi2 = problem.priors
    return pi1 * _cross_cov(m1, a, b) + pi2 * _cross_cov(m2, a, b)


def pooled_covariance(problem: TwoClassProblem, index: IndexSet) -> PooledCovariance:
    W = pooled_cross_covariance(problem, index, index)
    return PooledCovariance(index, 0.5 * (W + W.T))
