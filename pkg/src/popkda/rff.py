"""Random Fourier feature approximation of the Gaussian-kernel discriminant.

Each feature is written as ``a * cos(w^T x + phi)``: phase-shifted cosines
have ``a = sqrt(2)`` and a random phase, sine/cosine pairs use ``a = 1`` with
phases ``0`` and ``-pi/2``. Under a Gaussian class every product of two
features reduces, by product-to-sum, to expectations of single cosines, which
have the closed form in :func:`cos_expectation`.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .eigen import rank_one_geig
from .moments import Empirical, TwoClassProblem

VARIANTS = ("cos", "sincos")


@dataclass(frozen=True, eq=False)
class RffFeatures:
    variant: str
    frequencies: np.ndarray  # (D, p)
    phases: np.ndarray | None  # (D,) for the cos variant
    bandwidth: float
    seed: int

    @property
    def D(self) -> int:
        return self.frequencies.shape[0]

    @property
    def dim(self) -> int:
        return self.frequencies.shape[1]

    @property
    def n_features(self) -> int:
        return self.D if self.variant == "cos" else 2 * self.D

    def prefix(self, D: int) -> "RffFeatures":
        """The first ``D`` random features (same as sampling with ``D`` directly)."""
        if not 1 <= D <= self.D:
            raise ValueError(f"prefix size must lie in 1..{self.D}")
        phases = None if self.phases is None else self.phases[:D]
        return replace(self, frequencies=self.frequencies[:D], phases=phases)

    def waves(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-feature frequency rows, phases and amplitudes, in feature order."""
        if self.variant == "cos":
            return self.frequencies, self.phases, np.full(self.D, np.sqrt(2.0))
        freqs = np.repeat(self.frequencies, 2, axis=0)
        phases = np.tile([0.0, -np.pi / 2], self.D)
        return freqs, phases, np.ones(2 * self.D)

    def to_dict(self) -> dict:
        return {"variant": self.variant, "D": self.D, "p": self.dim,
                "bandwidth": self.bandwidth, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "RffFeatures":
        return sample_features(int(data["p"]), int(data["D"]), float(data["bandwidth"]),
                               data["variant"], int(data["seed"]))


def sample_features(p: int, D: int, bandwidth: float = 1.0, variant: str = "cos",
                    seed: int = 0) -> RffFeatures:
    """Draw ``D`` frequencies from ``N(0, I / bandwidth^2)`` (and phases for ``cos``).

    Frequencies and phases come from separate child streams of ``seed``, so a
    smaller ``D`` always yields a prefix of a larger draw.
    """
    if D < 1:
        raise ValueError("need at least one random feature")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    freq_ss, phase_ss = np.random.SeedSequence(seed).spawn(2)
    W = np.random.default_rng(freq_ss).standard_normal((D, p)) / bandwidth
    b = np.random.default_rng(phase_ss).uniform(0.0, 2 * np.pi, D) if variant == "cos" else None
    return RffFeatures(variant, W, b, float(bandwidth), int(seed))


def feature_eval(features: RffFeatures, X, scaled: bool = False) -> np.ndarray:
    """Feature vectors ``z(x)``; ``scaled=True`` gives the map ``Z_D = z / sqrt(D)``."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != features.dim:
        raise ValueError(f"features expect dimension {features.dim}, got {X.shape[1]}")
    freqs, phases, amps = features.waves()
    Z = amps * np.cos(X @ freqs.T + phases)
    if scaled:
        Z = Z / np.sqrt(features.D)
    return Z[0] if single else Z


def kernel_mc_check(features: RffFeatures, x, u) -> float:
    """Monte-Carlo kernel estimate ``(1/D) sum_i z_i(x)^T z_i(u)``."""
    zx = feature_eval(features, np.asarray(x, float))
    zu = feature_eval(features, np.asarray(u, float))
    return float(zx @ zu) / features.D


def cos_expectation(mu, sigma, w, b) -> float:
    """``E cos(w^T X + b)`` for ``X ~ N(mu, sigma)``."""
    mu = np.asarray(mu, dtype=float)
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    w = np.asarray(w, dtype=float)
    return float(np.exp(-0.5 * w @ sigma @ w) * np.cos(w @ mu + b))


def _cos_expectations(mu, sigma, W, b) -> np.ndarray:
    """Vectorised :func:`cos_expectation` over frequency rows ``W[..., :]``."""
    quad = np.einsum("...i,ij,...j->...", W, sigma, W)
    return np.exp(-0.5 * quad) * np.cos(W @ mu + b)


def gaussian_feature_moments(mean, cov, features: RffFeatures) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``E z`` and ``Cov(z, z)`` under ``N(mean, cov)``."""
    mean = np.asarray(mean, dtype=float)
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    freqs, phases, amps = features.waves()
    m = amps * _cos_expectations(mean, cov, freqs, phases)
    dW = freqs[:, None, :] - freqs[None, :, :]
    sW = freqs[:, None, :] + freqs[None, :, :]
    dp = phases[:, None] - phases[None, :]
    sp = phases[:, None] + phases[None, :]
    second = 0.5 * np.outer(amps, amps) * (
        _cos_expectations(mean, cov, dW, dp) + _cos_expectations(mean, cov, sW, sp)
    )
    C = second - np.outer(m, m)
    return m, 0.5 * (C + C.T)


def empirical_feature_moments(data, features: RffFeatures) -> tuple[np.ndarray, np.ndarray]:
    Z = feature_eval(features, np.atleast_2d(data))
    C = np.cov(Z, rowvar=False, bias=True).reshape(Z.shape[1], Z.shape[1])
    return Z.mean(axis=0), C


def _class_moments(cls, features):
    if isinstance(cls, Empirical):
        return empirical_feature_moments(cls.data, features)
    return gaussian_feature_moments(cls.mean, cls.cov, features)


@dataclass(frozen=True, eq=False)
class RffModel:
    features: RffFeatures
    nu: np.ndarray
    lam: float
    degenerate: bool
    ridge: float = 0.0
    threshold: float | None = None

    @property
    def dim(self) -> int:
        return self.features.dim

    def score(self, X) -> np.ndarray:
        """``f_D(x) = (1/D) sum_i nu_i^T z_i(x)``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return feature_eval(self.features, X) @ self.nu / self.features.D

    def flipped(self) -> "RffModel":
        return replace(self, nu=-self.nu)

    def to_dict(self) -> dict:
        return {"type": "rff", "features": self.features.to_dict(), "nu": self.nu.tolist(),
                "lambda": self.lam, "degenerate": self.degenerate, "ridge": self.ridge,
                "threshold": self.threshold}

    @classmethod
    def from_dict(cls, data: dict) -> "RffModel":
        feats = RffFeatures.from_dict(data["features"])
        nu = np.asarray(data["nu"], dtype=float)
        if nu.size != feats.n_features:
            raise ValueError("coefficient vector does not match the number of features")
        return cls(feats, nu, float(data["lambda"]), bool(data["degenerate"]),
                   float(data.get("ridge", 0.0)), data.get("threshold"))


def fit_population(problem: TwoClassProblem, features: RffFeatures, ridge: float = 0.0) -> RffModel:
    """Solve the randomized eigenproblem from class feature means and covariances.

    Gaussian classes use closed forms; :class:`Empirical` classes use sample averages.
    """
    if problem.dim != features.dim:
        raise ValueError("feature dimension does not match the problem")
    (m1, C1), (m2, C2) = (_class_moments(c, features) for c in (problem.class1, problem.class2))
    pi1, pi2 = problem.priors
    sol = rank_one_geig(m1 - m2, pi1 * C1 + pi2 * C2, ridge)
    return RffModel(features, sol.nu, sol.lam, sol.degenerate, sol.ridge_used)


def lambda_curve(problem: TwoClassProblem, features: RffFeatures, ridge: float = 0.0) -> list[tuple[int, float]]:
    """``(D, lam_D)`` for nested prefixes ``D = 1..features.D``."""
    return [(D, fit_population(problem, features.prefix(D), ridge).lam) for D in range(1, features.D + 1)]
