"""Multi-indices, multinomial coefficients and monomial evaluation.

Every polynomial quantity in the package (moment vectors, pooled covariance
matrices, discriminant coefficients) is indexed by an :class:`IndexSet`, so
the ordering defined here is the single coordinate convention shared by all
of them: graded by total degree, then lexicographically descending.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

MAX_EXACT_DEGREE = 20


class MultiIndex(tuple):
    """Exponent tuple ``(j_1, ..., j_p)`` with non-negative entries."""

    def __new__(cls, exponents: Sequence[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in multi-index {exps}")
        return super().__new__(cls, exps)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        out = 1
        for e in self:
            out *= math.factorial(e)
        return out

    def __add__(self, other):  # componentwise, not concatenation
        if len(self) != len(other):
            raise ValueError("multi-index length mismatch")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"MultiIndex{tuple(self)}"


def _exact(p: int, d: int) -> Iterator[tuple[int, ...]]:
    # lexicographically descending compositions of d into p parts
    if p == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _exact(p - 1, d - first):
            yield (first,) + rest


@dataclass(frozen=True)
class IndexSet:
    """Ordered collection of multi-indices with degrees ``min_degree..max_degree``."""

    p: int
    min_degree: int
    max_degree: int
    indices: tuple[MultiIndex, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indices)

    def __getitem__(self, k: int) -> MultiIndex:
        return self.indices[k]

    @property
    def exact(self) -> bool:
        return self.min_degree == self.max_degree

    @property
    def exponents(self) -> np.ndarray:
        """Exponent matrix of shape ``(len(self), p)``."""
        return np.array(self.indices, dtype=int).reshape(len(self), self.p)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([j.degree for j in self.indices], dtype=int)

    def position(self, j: Sequence[int]) -> int:
        return self._lookup[tuple(j)]

    @property
    def _lookup(self) -> dict:
        cache = self.__dict__.get("_lookup_cache")
        if cache is None:
            cache = {tuple(j): k for k, j in enumerate(self.indices)}
            object.__setattr__(self, "_lookup_cache", cache)
        return cache

    def labels(self, names: Sequence[str] | None = None) -> list[str]:
        """Human-readable monomial names, e.g. ``x1^2*x2``."""
        names = names or [f"x{k + 1}" for k in range(self.p)]
        out = []
        for j in self.indices:
            parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, j) if e]
            out.append("*".join(parts) or "1")
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IndexSet":
        return degree_range(int(data["p"]), int(data["min_degree"]), int(data["max_degree"]))


def degree_range(p: int, lo: int, hi: int) -> IndexSet:
    """All multi-indices with ``lo <= |j| <= hi`` in canonical order."""
    if p < 1:
        raise ValueError(f"dimension must be positive, got {p}")
    if lo < 0 or hi < lo:
        raise ValueError(f"invalid degree range {lo}..{hi}")
    indices = tuple(MultiIndex(j) for d in range(lo, hi + 1) for j in _exact(p, d))
    return IndexSet(p, lo, hi, indices)


def enumerate_indices(p: int, d: int, mode: str = "exact") -> IndexSet:
    """Enumerate ``S_d`` (``mode="exact"``) or ``S_1 u ... u S_d`` (``mode="range"``)."""
    if mode == "exact":
        return degree_range(p, d, d)
    if mode == "range":
        if d < 1:
            raise ValueError("range mode needs d >= 1")
        return degree_range(p, 1, d)
    raise ValueError(f"unknown degree mode {mode!r}")


def multinomial(d: int, j: Sequence[int]) -> int:
    """``d! / j!`` computed exactly; refuses ``d > 20``."""
    j = MultiIndex(j)
    if j.degree != d:
        raise ValueError(f"|j| = {j.degree} does not match degree {d}")
    if d > MAX_EXACT_DEGREE:
        raise ValueError(f"multinomial coefficients are limited to d <= {MAX_EXACT_DEGREE}")
    return math.factorial(d) // j.factorial


def monomial_eval(x: Sequence[float], j: Sequence[int]) -> float:
    """``prod_k x_k ** j_k`` with ``0 ** 0 == 1``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (len(j),):
        raise ValueError(f"point of length {x.size} does not match multi-index of length {len(j)}")
    return float(np.prod(x ** np.asarray(j, dtype=int)))


def monomials(X: np.ndarray, index: IndexSet) -> np.ndarray:
    """Design matrix ``[x_i ** j]`` of shape ``(n, len(index))``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != index.p:
        raise ValueError(f"points have dimension {X.shape[1]}, index set expects {index.p}")
    E = index.exponents
    # powers table avoids repeated exponentiation for high degrees
    top = int(E.max(initial=0))
    powers = np.ones((X.shape[0], index.p, top + 1))
    for k in range(1, top + 1):
        powers[:, :, k] = powers[:, :, k - 1] * X
    out = np.ones((X.shape[0], len(index)))
    for c in range(index.p):
        out *= powers[:, c, E[:, c]]
    return out
