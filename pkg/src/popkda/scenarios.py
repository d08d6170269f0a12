"""The two bivariate normal simulation settings, as named presets."""
from __future__ import annotations

import numpy as np

from .moments import DiagonalGaussian, TwoClassProblem


def scenario(sid: int, prior: float = 0.5) -> TwoClassProblem:
    """Scenario 1: shifted means, identity covariances.
    Scenario 2: zero means, ``diag(2, 0.2)`` against ``diag(0.2, 2)``."""
    if sid == 1:
        return TwoClassProblem(
            DiagonalGaussian([0.6, 0.9], [1.0, 1.0], prior),
            DiagonalGaussian([-1.0, -1.2], [1.0, 1.0], 1.0 - prior),
        )
    if sid == 2:
        return TwoClassProblem(
            DiagonalGaussian([0.0, 0.0], [2.0, 0.2], prior),
            DiagonalGaussian([0.0, 0.0], [0.2, 2.0], 1.0 - prior),
        )
    raise ValueError(f"unknown scenario {sid}; expected 1 or 2")


def draw(problem: TwoClassProblem, n_per_class: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Points and labels (1 or 2), ``n_per_class`` from each class."""
    rng = np.random.default_rng(seed)
    x1 = problem.class1.sample(n_per_class, rng)
    x2 = problem.class2.sample(n_per_class, rng)
    labels = np.repeat([1, 2], n_per_class)
    return np.vstack([x1, x2]), labels
