"""Kernel evaluation and the Hermite representation of the Gaussian kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .multiindex import MultiIndex, degree_range, monomials

HERMITE_MAX_DEGREE = 30


def _pair(x, u):
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {u.shape}")
    return x, u


@dataclass(frozen=True)
class HomoPoly:
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")

    def __call__(self, x, u) -> float:
        x, u = _pair(x, u)
        return float(np.dot(x, u) ** self.degree)

    def gram(self, X, U) -> np.ndarray:
        return (np.asarray(X, float) @ np.asarray(U, float).T) ** self.degree

    def to_dict(self) -> dict:
        return {"kind": "homo", "degree": self.degree}


@dataclass(frozen=True)
class InhomoPoly:
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")

    def __call__(self, x, u) -> float:
        x, u = _pair(x, u)
        return float((1.0 + np.dot(x, u)) ** self.degree)

    def gram(self, X, U) -> np.ndarray:
        return (1.0 + np.asarray(X, float) @ np.asarray(U, float).T) ** self.degree

    def to_dict(self) -> dict:
        return {"kind": "inhomo", "degree": self.degree}


@dataclass(frozen=True)
class Gaussian:
    bandwidth: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")

    def __call__(self, x, u) -> float:
        x, u = _pair(x, u)
        return float(np.exp(-np.sum((x - u) ** 2) / (2.0 * self.bandwidth**2)))

    def gram(self, X, U) -> np.ndarray:
        X = np.asarray(X, float)
        U = np.asarray(U, float)
        sq = (X**2).sum(1)[:, None] + (U**2).sum(1)[None, :] - 2.0 * X @ U.T
        return np.exp(-np.maximum(sq, 0.0) / (2.0 * self.bandwidth**2))

    def to_dict(self) -> dict:
        return {"kind": "gaussian", "bandwidth": self.bandwidth}


KernelSpec = Union[HomoPoly, InhomoPoly, Gaussian]


def kernel_eval(spec: KernelSpec, x, u) -> float:
    return spec(x, u)


def kernel_from_dict(data: dict) -> KernelSpec:
    kind = data["kind"]
    if kind == "homo":
        return HomoPoly(int(data["degree"]))
    if kind == "inhomo":
        return InhomoPoly(int(data["degree"]))
    if kind == "gaussian":
        return Gaussian(float(data["bandwidth"]))
    raise ValueError(f"unknown kernel kind {kind!r}")


def parse_kernel(text: str) -> KernelSpec:
    """Parse ``homo:3``, ``inhomo:2`` or ``gaussian:1.5``."""
    kind, _, arg = text.partition(":")
    if not arg:
        raise ValueError(f"kernel spec {text!r} needs a parameter, e.g. homo:2")
    if kind in ("homo", "inhomo"):
        return kernel_from_dict({"kind": kind, "degree": int(arg)})
    if kind == "gaussian":
        return Gaussian(float(arg))
    raise ValueError(f"unknown kernel {kind!r}")


def hermite_all(m_max: int, x) -> np.ndarray:
    """``He_0(x), ..., He_m_max(x)`` stacked along the first axis."""
    if m_max < 0:
        raise ValueError("Hermite degree must be non-negative")
    x = np.asarray(x, dtype=float)
    out = np.empty((m_max + 1,) + x.shape)
    out[0] = 1.0
    if m_max >= 1:
        out[1] = x
    for m in range(1, m_max):
        out[m + 1] = x * out[m] - m * out[m - 1]
    return out


def hermite_he(m: int, x):
    """Probabilist's Hermite polynomial ``He_m``; beyond degree 30 precision degrades."""
    val = hermite_all(m, x)[m]
    return float(val) if np.ndim(val) == 0 else val


def _log_norm(j: MultiIndex, bandwidth: float) -> float:
    return sum(math.lgamma(e + 1) for e in j) + j.degree * math.log(bandwidth)


def hermite_tilde(j, bandwidth: float, x) -> float:
    """``exp(-|x_w|^2 / 2) prod_k He_{j_k}(x_k / w) / (j! w^|j|)`` with ``x_w = x / w``."""
    j = MultiIndex(j)
    x = np.asarray(x, dtype=float)
    if x.shape != (len(j),):
        raise ValueError("point and multi-index dimensions differ")
    xw = x / bandwidth
    h = 1.0
    for e, xi in zip(j, xw):
        h *= hermite_all(e, xi)[e]
    gauss = math.exp(-0.5 * float(xw @ xw))
    if j.degree > 15:
        if h == 0.0:
            return 0.0
        return math.copysign(math.exp(math.log(abs(h)) - 0.5 * float(xw @ xw) - _log_norm(j, bandwidth)), h)
    return gauss * h / (j.factorial * bandwidth**j.degree)


def hermite_tilde_basis(bandwidth: float, N: int, x) -> np.ndarray:
    """``H~_j(x_w)`` for every ``|j| <= N`` in canonical order."""
    x = np.asarray(x, dtype=float)
    index = degree_range(x.size, 0, N)
    xw = x / bandwidth
    table = [hermite_all(N, xi) for xi in xw]
    gauss_log = -0.5 * float(xw @ xw)
    out = np.empty(len(index))
    for k, j in enumerate(index):
        h = 1.0
        for c, e in enumerate(j):
            h *= table[c][e]
        out[k] = h * math.exp(gauss_log - _log_norm(j, bandwidth)) if h else 0.0
    return out


def gaussian_truncated(bandwidth: float, N: int, x, u) -> float:
    """Truncated Hermite expansion ``sum_{|j| <= N} H~_j(x_w) u^j``; asymmetric in ``x, u``."""
    if N < 0:
        raise ValueError("truncation degree must be non-negative")
    x, u = _pair(x, u)
    index = degree_range(x.size, 0, N)
    return float(hermite_tilde_basis(bandwidth, N, x) @ monomials(u, index)[0])
