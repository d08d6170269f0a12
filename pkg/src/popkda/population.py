"""Population discriminants for polynomial and (truncated) Gaussian kernels."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .eigen import rank_one_geig
from .moments import TwoClassProblem, delta_vector, pooled_covariance, pooled_cross_covariance
from .multiindex import IndexSet, degree_range, enumerate_indices, monomials

MAX_FIT_DEGREE = 20


@dataclass(frozen=True)
class DiscriminantModel:
    """Polynomial discriminant ``f(x) = sum_j nu_j x^j`` over ``basis``."""

    basis: IndexSet
    nu: np.ndarray
    lam: float
    degenerate: bool
    provenance: dict = field(default_factory=dict)
    ridge: float = 0.0
    threshold: float | None = None

    @property
    def dim(self) -> int:
        return self.basis.p

    def score(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"model expects {self.dim}-dimensional points, got {X.shape[1]}")
        return monomials(X, self.basis) @ self.nu

    def flipped(self) -> "DiscriminantModel":
        return replace(self, nu=-self.nu)

    def coefficients(self) -> dict:
        return dict(zip(self.basis.labels(), self.nu.tolist()))

    def to_dict(self) -> dict:
        return {
            "type": "polynomial",
            "basis": self.basis.to_dict(),
            "nu": self.nu.tolist(),
            "lambda": self.lam,
            "degenerate": self.degenerate,
            "provenance": self.provenance,
            "ridge": self.ridge,
            "threshold": self.threshold,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiscriminantModel":
        basis = IndexSet.from_dict(data["basis"])
        nu = np.asarray(data["nu"], dtype=float)
        if nu.size != len(basis):
            raise ValueError("coefficient vector does not match basis size")
        return cls(basis, nu, float(data["lambda"]), bool(data["degenerate"]),
                   dict(data.get("provenance", {})), float(data.get("ridge", 0.0)),
                   data.get("threshold"))


def evaluate(model, x) -> float:
    """Score of a single point under any fitted model."""
    x = np.asarray(x, dtype=float)
    return float(model.score(x[None, :])[0])


def _check_degree(d: int) -> None:
    if d < 1:
        raise ValueError("degree must be >= 1")
    if 2 * d > 2 * MAX_FIT_DEGREE:
        raise ValueError(f"degree {d} needs moments of order {2 * d}; the limit is {2 * MAX_FIT_DEGREE}")


def fit_on_basis(problem: TwoClassProblem, basis: IndexSet, ridge: float = 0.0,
                 provenance: dict | None = None) -> DiscriminantModel:
    delta = delta_vector(problem, basis)
    W = pooled_covariance(problem, basis)
    sol = rank_one_geig(delta, W, ridge)
    return DiscriminantModel(basis, sol.nu, sol.lam, sol.degenerate, provenance or {}, sol.ridge_used)


def fit_homogeneous(problem: TwoClassProblem, d: int, ridge: float = 0.0) -> DiscriminantModel:
    _check_degree(d)
    basis = enumerate_indices(problem.dim, d, "exact")
    return fit_on_basis(problem, basis, ridge, {"fit": "homogeneous", "degree": d})


def fit_inhomogeneous(problem: TwoClassProblem, d: int, ridge: float = 0.0) -> DiscriminantModel:
    _check_degree(d)
    basis = enumerate_indices(problem.dim, d, "range")
    return fit_on_basis(problem, basis, ridge, {"fit": "inhomogeneous", "degree": d})


def fit_gaussian_truncated(problem: TwoClassProblem, bandwidth: float, N: int,
                           ridge: float = 0.0) -> DiscriminantModel:
    """Gaussian-kernel discriminant with the Hermite expansion truncated at degree ``N``.

    Matching coefficients of ``H~_i`` gives a system whose unknowns are indexed
    by ``1 <= |j| <= N``; it is assembled here degree block by degree block.
    The bandwidth does not enter the system, only the provenance.
    """
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    _check_degree(N)
    blocks = [degree_range(problem.dim, m, m) for m in range(1, N + 1)]
    delta = np.concatenate([delta_vector(problem, b).values for b in blocks])
    W = np.block([[pooled_cross_covariance(problem, a, b) for b in blocks] for a in blocks])
    sol = rank_one_geig(delta, 0.5 * (W + W.T), ridge)
    basis = degree_range(problem.dim, 1, N)
    prov = {"fit": "gaussian_truncated", "bandwidth": bandwidth, "truncation": N}
    return DiscriminantModel(basis, sol.nu, sol.lam, sol.degenerate, prov, sol.ridge_used)


def lambda_curve(problem: TwoClassProblem, N_max: int, ridge: float = 0.0) -> list[tuple[int, float]]:
    """``(N, lam_N)`` for ``N = 1..N_max`` from nested inhomogeneous fits."""
    if not 1 <= N_max <= MAX_FIT_DEGREE:
        raise ValueError(f"N_max must lie in 1..{MAX_FIT_DEGREE}")
    return [(N, fit_inhomogeneous(problem, N, ridge).lam) for N in range(1, N_max + 1)]


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -4.0
    x_max: float = 4.0
    y_min: float = -4.0
    y_max: float = 4.0
    nx: int = 101
    ny: int = 101

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid resolution must be positive")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx) if self.nx > 1 else np.array([self.x_min])

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny) if self.ny > 1 else np.array([self.y_min])

    def points(self) -> np.ndarray:
        """Grid points, row-major: y varies slowest."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.column_stack([gx.ravel(), gy.ravel()])

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``xmin,xmax,ymin,ymax,nx,ny``."""
        parts = text.split(",")
        if len(parts) != 6:
            raise ValueError("grid spec must be xmin,xmax,ymin,ymax,nx,ny")
        a, b, c, d = (float(v) for v in parts[:4])
        return cls(a, b, c, d, int(parts[4]), int(parts[5]))


def grid_eval(model, grid: GridSpec) -> np.ndarray:
    """Score matrix of shape ``(ny, nx)``; ``out[r, c]`` is at ``(xs[c], ys[r])``."""
    return model.score(grid.points()).reshape(grid.ny, grid.nx)
