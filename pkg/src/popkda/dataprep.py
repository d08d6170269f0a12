"""Spambase ingestion, skew-reducing transforms, correlation PCA and splitting."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .sample import LabeledSample

N_FEATURES = 57
N_PERCENT = 54  # 48 word + 6 punctuation frequencies, in percent
POLICIES = ("logit-log", "logit-all")


class SpambaseFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RawTable:
    features: np.ndarray  # (n, 57)
    labels: np.ndarray  # 1 = spam, 0 = regular

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def proportions(self) -> dict:
        spam = float(np.mean(self.labels == 1))
        return {"regular": 1.0 - spam, "spam": spam}


def load_spambase(path) -> RawTable:
    """Read the UCI ``spambase.data`` layout: 57 numeric columns then a 0/1 label."""
    rows, labels = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != N_FEATURES + 1:
                raise SpambaseFormatError(f"{path}:{lineno}: expected {N_FEATURES + 1} columns, got {len(row)}")
            try:
                vals = [float(v) for v in row]
            except ValueError:
                raise SpambaseFormatError(f"{path}:{lineno}: non-numeric value") from None
            if vals[-1] not in (0.0, 1.0):
                raise SpambaseFormatError(f"{path}:{lineno}: label must be 0 or 1")
            rows.append(vals[:-1])
            labels.append(int(vals[-1]))
    if not rows:
        raise SpambaseFormatError(f"{path}: no data rows")
    X = np.array(rows)
    if np.any(X[:, :N_PERCENT] < 0) or np.any(X[:, :N_PERCENT] > 100):
        raise SpambaseFormatError(f"{path}: percentage columns outside [0, 100]")
    if np.any(X[:, N_PERCENT:] < 1):
        raise SpambaseFormatError(f"{path}: capital-run-length columns must be >= 1")
    return RawTable(X, np.array(labels))


def zero_replace(values) -> np.ndarray:
    """Replace zeros by half the smallest positive value of the column.

    An all-zero column is returned unchanged; :func:`transform` drops it.
    """
    v = np.asarray(values, dtype=float).copy()
    pos = v[v > 0]
    if pos.size:
        v[v == 0] = pos.min() / 2.0
    return v


def _upper_replace(v: np.ndarray, top: float) -> np.ndarray:
    # mirror of zero_replace at the upper end: top -> top - half the smallest gap below it
    below = v[v < top]
    if np.any(v >= top) and below.size:
        v = v.copy()
        v[v >= top] = top - (top - below.max()) / 2.0
    return v


def _logit(p: np.ndarray) -> np.ndarray:
    return np.log(p) - np.log1p(-p)


@dataclass
class TransformParams:
    policy: str
    kept: np.ndarray  # indices of retained columns
    dropped: list = field(default_factory=list)


def transform(table: RawTable, policy: str = "logit-log") -> tuple[np.ndarray, TransformParams]:
    """Logit of percentage columns (after zero replacement); lengths by ``policy``.

    ``logit-log``: natural log of the three capital-run-length columns.
    ``logit-all``: logit of lengths rescaled into (0, 1) by ``v / (max + 1)``.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    cols, kept, dropped = [], [], []
    for k in range(table.features.shape[1]):
        v = table.features[:, k]
        if k < N_PERCENT:
            if not np.any(v > 0):
                warnings.warn(f"column {k} is all zero; dropped", stacklevel=2)
                dropped.append(k)
                continue
            v = _upper_replace(zero_replace(v), 100.0)
            cols.append(_logit(v / 100.0))
        elif policy == "logit-log":
            cols.append(np.log(v))
        else:
            cols.append(_logit(v / (v.max() + 1.0)))
        kept.append(k)
    return np.column_stack(cols), TransformParams(policy, np.array(kept), dropped)


@dataclass(frozen=True, eq=False)
class PcaModel:
    means: np.ndarray
    sds: np.ndarray
    loadings: np.ndarray  # (n_columns, k), orthonormal columns
    explained: np.ndarray  # (k,) variance ratios
    transform: TransformParams | None = None

    @property
    def k(self) -> int:
        return self.loadings.shape[1]

    def to_dict(self) -> dict:
        out = {
            "means": self.means.tolist(),
            "sds": self.sds.tolist(),
            "loadings": self.loadings.tolist(),
            "explained": self.explained.tolist(),
        }
        if self.transform is not None:
            out["transform"] = {"policy": self.transform.policy,
                                "kept": self.transform.kept.tolist(),
                                "dropped": list(self.transform.dropped)}
        return out


def pca_fit(matrix, k: int, transform: TransformParams | None = None) -> PcaModel:
    """Principal components of the correlation matrix of ``matrix``'s columns."""
    M = np.asarray(matrix, dtype=float)
    means = M.mean(axis=0)
    sds = M.std(axis=0, ddof=1)
    zero = np.flatnonzero(sds == 0)
    if zero.size:
        raise ValueError(f"column {int(zero[0])} has zero variance")
    if not 1 <= k <= min(M.shape):
        raise ValueError(f"k must lie in 1..{min(M.shape)}")
    R = np.corrcoef(M, rowvar=False)
    vals, vecs = np.linalg.eigh(R)
    order = np.argsort(vals)[::-1][:k]
    vecs = vecs[:, order]
    flip = vecs[np.argmax(np.abs(vecs), axis=0), np.arange(k)] < 0
    vecs[:, flip] *= -1
    return PcaModel(means, sds, vecs, vals[order] / vals.sum(), transform)


def pca_scores(model: PcaModel, matrix) -> np.ndarray:
    Z = (np.asarray(matrix, dtype=float) - model.means) / model.sds
    return Z @ model.loadings


def split_indices(labels, train_frac: float = 0.6, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Sorted train and test row indices, stratified by class (labels 1 or 2)."""
    if not 0.0 < train_frac < 1.0:
        raise ValueError("train_frac must lie in (0, 1)")
    labels = np.asarray(labels).astype(int)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in (1, 2):
        idx = np.flatnonzero(labels == c)
        n_train = int(round(train_frac * idx.size))
        if n_train == 0 or n_train == idx.size:
            raise ValueError(f"train_frac={train_frac} leaves class {c} empty in one split")
        idx = rng.permutation(idx)
        train.append(idx[:n_train])
        test.append(idx[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def split(scores, labels, train_frac: float = 0.6, seed: int = 0) -> tuple[LabeledSample, LabeledSample]:
    """Seeded split stratified by class; labels must be 1 or 2."""
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    labels = np.asarray(labels).astype(int)
    tr, te = split_indices(labels, train_frac, seed)
    return LabeledSample(scores[tr], labels[tr]), LabeledSample(scores[te], labels[te])


@dataclass
class SpamData:
    table: RawTable
    pca: PcaModel
    scores: np.ndarray
    labels: np.ndarray  # 1 = spam, 2 = regular
    train: LabeledSample
    test: LabeledSample
    train_index: np.ndarray


def prepare_spam(path, k: int = 2, train_frac: float = 0.6, seed: int = 0,
                 policy: str = "logit-log") -> SpamData:
    table = load_spambase(path)
    M, params = transform(table, policy)
    pca = pca_fit(M, k, params)
    scores = pca_scores(pca, M)
    labels = np.where(table.labels == 1, 1, 2)
    tr, te = split_indices(labels, train_frac, seed)
    train = LabeledSample(scores[tr], labels[tr])
    test = LabeledSample(scores[te], labels[te])
    return SpamData(table, pca, scores, labels, train, test, tr)
