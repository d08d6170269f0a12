import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popkda.dataprep import (N_FEATURES, N_PERCENT, RawTable, SpambaseFormatError, load_spambase, pca_fit,
                             pca_scores, prepare_spam, split, transform, zero_replace)

ROOT = Path(__file__).resolve().parents[1]


def spam_path():
    for cand in (os.environ.get("SPAMBASE_PATH"), ROOT / "data" / "spambase.data",
                 ROOT / "data" / "spambase_keel.data"):
        if cand and Path(cand).is_file():
            return Path(cand)
    return None


def synthetic_table(n=40, seed=0):
    rng = np.random.default_rng(seed)
    pct = np.where(rng.random((n, N_PERCENT)) < 0.6, 0.0, np.round(rng.uniform(0.01, 5, (n, N_PERCENT)), 2))
    lengths = np.round(1 + rng.exponential(20, (n, 3)))
    labels = np.arange(n) % 2
    return RawTable(np.hstack([pct, lengths]), labels)


def write_table(path, table):
    with open(path, "w") as fh:
        for row, lab in zip(table.features, table.labels):
            fh.write(",".join(repr(float(v)) for v in row) + f",{lab}\n")


def test_load_round_trip(tmp_path):
    t = synthetic_table()
    write_table(tmp_path / "s.data", t)
    again = load_spambase(tmp_path / "s.data")
    np.testing.assert_array_equal(again.features, t.features)
    np.testing.assert_array_equal(again.labels, t.labels)
    assert again.proportions == {"regular": 0.5, "spam": 0.5}


def test_load_errors(tmp_path):
    empty = tmp_path / "empty.data"
    empty.write_text("")
    with pytest.raises(SpambaseFormatError):
        load_spambase(empty)
    short = tmp_path / "short.data"
    good = ",".join(["0"] * 54 + ["1", "1", "1", "0"])
    short.write_text(good + "\n" + ",".join(["0"] * 56) + "\n")
    with pytest.raises(SpambaseFormatError, match=":2:"):
        load_spambase(short)
    text = tmp_path / "text.data"
    text.write_text(good.replace("0", "x", 1) + "\n")
    with pytest.raises(SpambaseFormatError, match=":1:"):
        load_spambase(text)
    pct = tmp_path / "pct.data"
    pct.write_text(good.replace("0", "150", 1) + "\n")
    with pytest.raises(SpambaseFormatError):
        load_spambase(pct)


def test_zero_replace_examples():
    np.testing.assert_array_equal(zero_replace([0, 2, 4]), [1, 2, 4])
    np.testing.assert_array_equal(zero_replace([3, 5]), [3, 5])
    np.testing.assert_array_equal(zero_replace([0, 0, 0.5]), [0.25, 0.25, 0.5])
    np.testing.assert_array_equal(zero_replace([0, 0]), [0, 0])


@given(st.lists(st.floats(0, 100), min_size=1, max_size=30))
def test_zero_replace_idempotent(values):
    once = zero_replace(values)
    np.testing.assert_array_equal(zero_replace(once), once)


def test_transform_examples():
    feats = np.zeros((3, N_FEATURES))
    feats[:, :N_PERCENT] = np.array([[50.0], [25.0], [10.0]])
    feats[:, N_PERCENT:] = np.array([[1.0], [np.e], [5.0]])
    M, params = transform(RawTable(feats, np.array([0, 1, 0])), "logit-log")
    assert M[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert M[1, 0] == pytest.approx(np.log(0.25 / 0.75))
    assert M[1, 0] == pytest.approx(-1.0986, abs=1e-4)
    assert M[0, -1] == 0.0 and M[1, -1] == pytest.approx(1.0)
    assert len(params.kept) == N_FEATURES and params.dropped == []


def test_transform_hundred_percent_and_all_zero_column():
    t = synthetic_table()
    feats = t.features.copy()
    feats[0, 3] = 100.0
    feats[:, 7] = 0.0
    with pytest.warns(UserWarning, match="column 7"):
        M, params = transform(RawTable(feats, t.labels))
    assert np.all(np.isfinite(M))
    assert params.dropped == [7] and M.shape[1] == N_FEATURES - 1
    with pytest.raises(ValueError):
        transform(t, "sqrt")


def test_logit_all_policy_finite():
    M, params = transform(synthetic_table(), "logit-all")
    assert np.all(np.isfinite(M)) and params.policy == "logit-all"


def test_pca_full_rank_explains_everything():
    X = np.random.default_rng(3).normal(size=(200, 3)) @ [[1.0, 0.4, 0.0], [0.0, 1.0, 0.3], [0.0, 0.0, 1.0]]
    full = pca_fit(X, 3)
    assert full.explained.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(full.loadings.T @ full.loadings, np.eye(3), atol=1e-12)


def test_pca_axes_for_uncorrelated_columns():
    # distinct variances do not matter after standardisation; use exactly uncorrelated columns
    a = np.array([1.0, -1.0, 1.0, -1.0])
    b = np.array([1.0, 1.0, -1.0, -1.0])
    c = a * b
    X = np.column_stack([a, b * 3 + 5, c])
    m = pca_fit(X, 3)
    np.testing.assert_allclose(np.abs(m.loadings) @ np.ones(3), np.ones(3), atol=1e-12)
    assert np.all(np.isclose(np.abs(m.loadings), 0) | np.isclose(np.abs(m.loadings), 1))


def test_pca_errors():
    X = np.random.default_rng(0).normal(size=(10, 3))
    X[:, 1] = 4.0
    with pytest.raises(ValueError, match="column 1"):
        pca_fit(X, 2)
    with pytest.raises(ValueError):
        pca_fit(np.random.default_rng(0).normal(size=(10, 3)), 4)


def test_pca_scores_centered_uncorrelated():
    M, params = transform(synthetic_table(200, 1))
    keep = M.std(axis=0) > 0
    model = pca_fit(M[:, keep], 4, params)
    S = pca_scores(model, M[:, keep])
    np.testing.assert_allclose(S.mean(axis=0), 0, atol=1e-10)
    C = np.corrcoef(S, rowvar=False)
    assert np.max(np.abs(C - np.diag(np.diag(C)))) < 1e-10
    assert model.explained.sum() <= 1.0
    big = np.argmax(np.abs(model.loadings), axis=0)
    assert np.all(model.loadings[big, np.arange(4)] > 0)


def test_split_examples():
    labels = np.array([1] * 50 + [2] * 77)
    X = np.arange(127.0)[:, None]
    a_tr, a_te = split(X, labels, 0.6, seed=4)
    b_tr, _ = split(X, labels, 0.6, seed=4)
    np.testing.assert_array_equal(a_tr.points, b_tr.points)
    for c, n in ((1, 50), (2, 77)):
        assert abs(np.sum(a_tr.labels == c) - 0.6 * n) <= 1
    assert a_tr.n + a_te.n == 127
    assert not set(a_tr.points.ravel()) & set(a_te.points.ravel())
    with pytest.raises(ValueError):
        split(np.zeros((5, 1)), [1, 1, 2, 2, 2], 0.999)
    with pytest.raises(ValueError):
        split(np.zeros((5, 1)), [1, 1, 2, 2, 2], 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 60), st.integers(3, 60), st.floats(0.2, 0.8), st.integers(0, 1000))
def test_split_preserves_proportions(n1, n2, frac, seed):
    labels = np.array([1] * n1 + [2] * n2)
    tr, te = split(np.arange(n1 + n2, dtype=float)[:, None], labels, frac, seed)
    for c, n in ((1, n1), (2, n2)):
        assert abs(np.sum(tr.labels == c) - frac * n) <= 1


def test_pipeline_deterministic_on_synthetic(tmp_path):
    write_table(tmp_path / "s.data", synthetic_table(120, 5))
    a = prepare_spam(tmp_path / "s.data", k=2, seed=3)
    b = prepare_spam(tmp_path / "s.data", k=2, seed=3)
    np.testing.assert_array_equal(a.scores, b.scores)
    np.testing.assert_array_equal(a.train.points, b.train.points)


@pytest.mark.skipif(spam_path() is None, reason="no spambase file available")
def test_real_file_shape_and_proportions():
    t = load_spambase(spam_path())
    assert t.features.shape[1] == N_FEATURES
    assert t.proportions["regular"] == pytest.approx(0.606, abs=0.001)
    assert t.proportions["spam"] == pytest.approx(0.394, abs=0.001)
    if spam_path().name == "spambase.data":
        assert t.n == 4601
