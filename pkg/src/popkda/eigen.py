"""Rank-one generalized eigenproblem ``d d^T v = lam W v`` and a dense oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, lapack, solve_triangular

MAX_CONDITION = 1e14
DEGENERATE_TOL = 1e-12


class SingularWithinClass(np.linalg.LinAlgError):
    """The (ridged) within-class matrix cannot be factored reliably."""

    def __init__(self, ridge: float, condition: float):
        self.ridge = ridge
        self.condition = condition
        super().__init__(
            f"within-class matrix is numerically singular (condition ~{condition:.3g}) "
            f"with ridge={ridge:g}; increase the ridge"
        )


@dataclass(frozen=True)
class EigenSolution:
    lam: float
    nu: np.ndarray
    degenerate: bool
    ridge_used: float


def orient(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude entry is positive."""
    v = np.asarray(v, dtype=float)
    if v.size and v[np.argmax(np.abs(v))] < 0:
        return -v
    return v


def default_sample_ridge(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    return 1e-8 * float(np.trace(w)) / w.shape[0]


def rank_one_geig(delta, w, ridge: float = 0.0) -> EigenSolution:
    """Top eigenpair of ``delta delta^T nu = lam (w + ridge I) nu``.

    The only nonzero eigenvalue is ``delta^T A^-1 delta`` with eigenvector
    ``A^-1 delta`` (``A = w + ridge I``). The solve is done after a symmetric
    diagonal scaling of ``A``, which leaves both quantities unchanged but keeps
    moment matrices of very different magnitudes factorable.
    """
    delta = np.asarray(delta, dtype=float).ravel()
    w = np.asarray(w, dtype=float)
    if w.shape != (delta.size, delta.size):
        raise ValueError(f"delta has length {delta.size} but W has shape {w.shape}")
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    if np.linalg.norm(delta) < DEGENERATE_TOL:
        return EigenSolution(0.0, np.zeros_like(delta), True, float(ridge))

    A = w + ridge * np.eye(delta.size)
    A = 0.5 * (A + A.T)
    diag = np.diag(A)
    if np.any(diag <= 0):
        raise SingularWithinClass(ridge, np.inf)
    s = 1.0 / np.sqrt(diag)
    As = A * s[:, None] * s[None, :]
    factor = _cholesky_checked(As, ridge)
    v = s * cho_solve(factor, s * delta)
    lam = float(delta @ v)
    return EigenSolution(max(lam, 0.0), orient(v / np.linalg.norm(v)), False, float(ridge))


def _cholesky_checked(A: np.ndarray, ridge: float):
    c, info = lapack.dpotrf(A, lower=False, clean=True)
    if info != 0:
        raise SingularWithinClass(ridge, np.inf)
    rcond, info = lapack.dpocon(c, np.abs(A).sum(axis=0).max())
    if info != 0 or rcond * MAX_CONDITION < 1.0:
        raise SingularWithinClass(ridge, 1.0 / rcond if rcond > 0 else np.inf)
    return c, False


def brute_force_geig(b, w) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of ``b v = lam w v`` by Cholesky whitening, sorted descending.

    Eigenvectors are the columns of the second return value, each scaled to
    unit Euclidean norm and oriented with :func:`orient`.
    """
    b = np.asarray(b, dtype=float)
    w = np.asarray(w, dtype=float)
    try:
        L = np.linalg.cholesky(w)
    except np.linalg.LinAlgError:
        raise ValueError("w must be symmetric positive definite") from None
    C = solve_triangular(L, solve_triangular(L, b, lower=True).T, lower=True)
    vals, U = np.linalg.eigh(0.5 * (C + C.T))
    order = np.argsort(vals)[::-1]
    vals, U = vals[order], U[:, order]
    V = solve_triangular(L.T, U, lower=False)
    V = V / np.linalg.norm(V, axis=0)
    V = np.column_stack([orient(V[:, k]) for k in range(V.shape[1])])
    return vals, V
