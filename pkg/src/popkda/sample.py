"""Sample kernel discriminant analysis in the dual (n x n) formulation.

Also holds the threshold and classification helpers shared by every fitted
model, and the moment-space fast path for polynomial kernels.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .eigen import SingularWithinClass, default_sample_ridge, rank_one_geig
from .kernels import HomoPoly, InhomoPoly, KernelSpec, kernel_from_dict
from .moments import TwoClassProblem, pooled_covariance
from .multiindex import enumerate_indices
from .population import DiscriminantModel, fit_on_basis


@dataclass(frozen=True, eq=False)
class LabeledSample:
    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        labels = np.asarray(self.labels).astype(int).ravel()
        if points.shape[0] != labels.size:
            raise ValueError(f"{points.shape[0]} points but {labels.size} labels")
        if not set(np.unique(labels)) <= {1, 2}:
            raise ValueError("labels must be 1 or 2")
        if not (np.any(labels == 1) and np.any(labels == 2)):
            raise ValueError("both classes need at least one point")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def of_class(self, c: int) -> np.ndarray:
        return self.points[self.labels == c]

    def as_problem(self) -> TwoClassProblem:
        return TwoClassProblem.from_samples(self.of_class(1), self.of_class(2))

    def permuted(self, perm) -> "LabeledSample":
        return LabeledSample(self.points[perm], self.labels[perm])

    def to_csv(self, path, header: str | None = None) -> None:
        with open(path, "w", newline="") as fh:
            if header:
                fh.write(header)
            w = csv.writer(fh)
            w.writerow([f"x{k + 1}" for k in range(self.dim)] + ["label"])
            for row, lab in zip(self.points, self.labels):
                w.writerow([repr(float(v)) for v in row] + [int(lab)])

    @classmethod
    def from_csv(cls, path) -> "LabeledSample":
        """Feature columns then an integer label column; ``#`` lines and a header row are skipped."""
        rows = []
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or row[0].startswith("#"):
                    continue
                try:
                    rows.append([float(v) for v in row])
                except ValueError:
                    if rows:
                        raise ValueError(f"{path}:{lineno}: non-numeric value") from None
                    continue  # header
        if not rows:
            raise ValueError(f"{path}: no data rows")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError(f"{path}: rows have differing column counts {sorted(widths)}")
        arr = np.array(rows)
        return cls(arr[:, :-1], arr[:, -1])


def kernel_matrix(sample, spec: KernelSpec) -> np.ndarray:
    """Symmetric Gram matrix of a :class:`LabeledSample` or a bare point array."""
    X = sample.points if isinstance(sample, LabeledSample) else np.atleast_2d(np.asarray(sample, dtype=float))
    K = spec.gram(X, X)
    return 0.5 * (K + K.T)


def _between_within_from_gram(K: np.ndarray, labels: np.ndarray):
    n = labels.size
    parts = [K[:, labels == c] for c in (1, 2)]
    means = [P.mean(axis=1) for P in parts]
    delta = means[0] - means[1]
    centered = [P - m[:, None] for P, m in zip(parts, means)]
    W = sum(C @ C.T for C in centered) / n
    return delta, 0.5 * (W + W.T)


def between_within(sample: LabeledSample, spec: KernelSpec) -> tuple[np.ndarray, np.ndarray]:
    """``B_n`` (rank one) and ``W_n`` (pooled, class-centred) kernel matrices."""
    delta, W = _between_within_from_gram(kernel_matrix(sample, spec), sample.labels)
    return np.outer(delta, delta), W


@dataclass(frozen=True, eq=False)
class SampleKdaModel:
    points: np.ndarray
    kernel: KernelSpec
    alpha: np.ndarray
    lam: float
    ridge: float
    threshold: float | None = None
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def score(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"model expects {self.dim}-dimensional points, got {X.shape[1]}")
        return self.kernel.gram(X, self.points) @ self.alpha

    def flipped(self) -> "SampleKdaModel":
        return replace(self, alpha=-self.alpha)

    def to_dict(self) -> dict:
        return {
            "type": "sample",
            "kernel": self.kernel.to_dict(),
            "points": self.points.tolist(),
            "alpha": self.alpha.tolist(),
            "lambda": self.lam,
            "ridge": self.ridge,
            "threshold": self.threshold,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SampleKdaModel":
        points = np.asarray(data["points"], dtype=float)
        alpha = np.asarray(data["alpha"], dtype=float)
        if alpha.size != points.shape[0]:
            raise ValueError("alpha does not match the number of training points")
        return cls(points, kernel_from_dict(data["kernel"]), alpha, float(data["lambda"]),
                   float(data["ridge"]), data.get("threshold"), bool(data.get("degenerate", False)))


def fit(sample: LabeledSample, spec: KernelSpec, ridge: float | None = None) -> SampleKdaModel:
    """Leading solution of ``B_n a = lam (W_n + ridge I) a``.

    ``ridge=None`` uses ``1e-8 * trace(W_n) / n``; ``W_n`` is always singular.
    """
    if sample.n < 2:
        raise ValueError("need at least two training points")
    delta, W = _between_within_from_gram(kernel_matrix(sample, spec), sample.labels)
    if ridge is None:
        ridge = default_sample_ridge(W)
    sol = rank_one_geig(delta, W, ridge)
    return SampleKdaModel(sample.points, spec, sol.nu, sol.lam, sol.ridge_used, degenerate=sol.degenerate)


def score(model, x) -> float:
    return float(model.score(np.asarray(x, dtype=float)[None, :])[0])


def fit_moment_space(sample: LabeledSample, spec: KernelSpec, ridge: float | None = None) -> DiscriminantModel:
    """Polynomial-kernel fit from empirical moment differences and pooled covariances.

    Same discriminant as :func:`fit` for ``HomoPoly``/``InhomoPoly`` kernels up to
    sign, scale and (inhomogeneous case) an additive constant, at a cost set
    by the number of monomials rather than ``n``.
    """
    if isinstance(spec, InhomoPoly):
        mode = "range"
    elif isinstance(spec, HomoPoly):
        mode = "exact"
    else:
        raise ValueError("moment-space fitting needs a polynomial kernel")
    problem = sample.as_problem()
    basis = enumerate_indices(problem.dim, spec.degree, mode)
    prov = {"fit": "moment_space", "kernel": spec.to_dict()}
    if ridge is not None:
        return fit_on_basis(problem, basis, ridge, prov)
    # W is full rank once n exceeds the number of monomials; a trace-scaled ridge
    # would swamp the low-degree variances, so only fall back to it when singular
    try:
        return fit_on_basis(problem, basis, 0.0, prov)
    except SingularWithinClass:
        ridge = default_sample_ridge(pooled_covariance(problem, basis).matrix)
        return fit_on_basis(problem, basis, ridge, prov)


def best_threshold(scores, labels) -> tuple[float, float, bool]:
    """Exact 0-1 training-error minimiser over score midpoints and +-inf.

    Returns ``(threshold, error, flip)``; ``flip`` says the scores must be
    negated so that class 1 has the higher mean. Points with score above the
    threshold are assigned to class 1. Ties go to the smallest ``|threshold|``.
    """
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).astype(int).ravel()
    flip = bool(s[y == 1].mean() < s[y == 2].mean())
    if flip:
        s = -s
    u = np.unique(s)
    cands = np.concatenate([[-np.inf], 0.5 * (u[:-1] + u[1:]), [np.inf]])
    s1 = np.sort(s[y == 1])
    s2 = np.sort(s[y == 2])
    # class 1 wrong when s <= t; class 2 wrong when s > t
    err1 = np.searchsorted(s1, cands, side="right")
    err2 = s2.size - np.searchsorted(s2, cands, side="right")
    errs = (err1 + err2) / y.size
    best = errs.min()
    tied = cands[errs == best]
    t = tied[np.argmin(np.abs(tied))]
    return float(t), float(best), flip


def choose_threshold(model, sample: LabeledSample):
    """Copy of ``model`` oriented so class 1 scores high, with the training-optimal threshold."""
    t, _, flip = best_threshold(model.score(sample.points), sample.labels)
    if flip:
        model = model.flipped()
    return replace(model, threshold=t)


@dataclass(frozen=True)
class Classification:
    labels: np.ndarray
    confusion: np.ndarray | None = None  # rows: truth 1, 2; cols: predicted 1, 2

    @property
    def error(self) -> float:
        c = self.confusion
        return float((c[0, 1] + c[1, 0]) / c.sum())

    @property
    def class_errors(self) -> tuple[float, float]:
        """Fraction of true class 1 and true class 2 points misassigned."""
        c = self.confusion
        return float(c[0, 1] / c[0].sum()), float(c[1, 0] / c[1].sum())


def classify(model, points, truth=None) -> Classification:
    if model.threshold is None:
        raise ValueError("model has no threshold; call choose_threshold first")
    pred = np.where(model.score(points) > model.threshold, 1, 2)
    if truth is None:
        return Classification(pred)
    truth = np.asarray(truth).astype(int)
    conf = np.array([[np.sum((truth == a) & (pred == b)) for b in (1, 2)] for a in (1, 2)])
    return Classification(pred, conf)
