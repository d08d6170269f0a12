import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popkda.moments import (DiagonalGaussian, Empirical, FullGaussian, TwoClassProblem, delta_vector,
                            gaussian_raw_moment_1d, pooled_covariance, raw_moment)
from popkda.multiindex import degree_range, enumerate_indices, monomials
from popkda.scenarios import scenario


def test_one_dimensional_moments():
    assert gaussian_raw_moment_1d(3.3, 0.7, 0) == 1
    assert gaussian_raw_moment_1d(0.6, 1.0, 2) == pytest.approx(1.36, abs=1e-15)
    assert gaussian_raw_moment_1d(0.0, 2.0, 4) == pytest.approx(12.0, abs=1e-14)
    # N(mu, s2): E X^3 = mu^3 + 3 mu s2
    assert gaussian_raw_moment_1d(1.5, 0.4, 3) == pytest.approx(1.5**3 + 3 * 1.5 * 0.4)


def test_raw_moment_examples():
    s2 = scenario(2)
    assert raw_moment(s2.class1, (2, 0)) == pytest.approx(2.0)
    assert raw_moment(s2.class1, (0, 0)) == 1.0
    assert raw_moment(Empirical([[1, 2], [3, 4]]), (1, 1)) == pytest.approx(7.0)


def test_delta_examples():
    s1, s2 = scenario(1), scenario(2)
    np.testing.assert_allclose(np.asarray(delta_vector(s1, enumerate_indices(2, 1))), [1.6, 2.1], atol=1e-15)
    np.testing.assert_array_equal(np.asarray(delta_vector(s2, enumerate_indices(2, 1))), [0.0, 0.0])
    d2 = delta_vector(s1, enumerate_indices(2, 2))
    assert d2.values[d2.index.position((2, 0))] == pytest.approx(-0.64, abs=1e-14)


def test_pooled_covariance_examples():
    np.testing.assert_allclose(np.asarray(pooled_covariance(scenario(1), enumerate_indices(2, 1))),
                               np.eye(2), atol=1e-15)
    np.testing.assert_allclose(np.asarray(pooled_covariance(scenario(2), enumerate_indices(2, 1))),
                               np.diag([1.1, 1.1]), atol=1e-15)


def test_empirical_two_point_classes_are_psd():
    prob = TwoClassProblem(Empirical([[0.0, 1.0], [2.0, -1.0]], 0.5), Empirical([[1.0, 1.0], [0.5, 3.0]], 0.5))
    W = np.asarray(pooled_covariance(prob, enumerate_indices(2, 2, mode="range")))
    assert np.linalg.eigvalsh(W).min() >= -1e-10


def test_empirical_moments_are_sample_averages(rng):
    X = rng.normal(size=(50, 2))
    tab = Empirical(X).moment_table(4)
    idx = degree_range(2, 0, 4)
    np.testing.assert_array_equal(tab.vector(idx), monomials(X, idx).mean(axis=0))
    assert tab[(0, 0)] == 1.0


def test_monte_carlo_oracle_diagonal_gaussian():
    # 10^6 draws; every moment of degree <= 6 within 4 standard errors
    cls = DiagonalGaussian([0.6, -0.4], [1.0, 0.5])
    X = cls.sample(10**6, np.random.default_rng(2024))
    idx = degree_range(2, 1, 6)
    M = monomials(X, idx)
    est = M.mean(axis=0)
    se = M.std(axis=0, ddof=1) / np.sqrt(X.shape[0])
    exact = cls.moment_table(6).vector(idx)
    assert np.all(np.abs(est - exact) <= 4 * se)


def test_full_gaussian_matches_diagonal_closed_form():
    mean, var = [0.3, -0.2], [1.2, 0.6]
    full = FullGaussian(mean, np.diag(var))
    est, se = full.moment_estimates(4)
    diag = DiagonalGaussian(mean, var)
    for j, v in est.items():
        if sum(j) == 0:
            continue
        assert abs(v - raw_moment(diag, j)) <= 5 * se[j] + 1e-12


def test_full_gaussian_validation():
    with pytest.raises(ValueError):
        FullGaussian([0, 0], [[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        FullGaussian([0, 0], [[1, 0.5], [0.4, 1]])


def test_class_spec_validation():
    with pytest.raises(ValueError):
        DiagonalGaussian([0, 0], [1, -1])
    with pytest.raises(ValueError):
        Empirical(np.empty((0, 2)))
    with pytest.raises(ValueError):
        TwoClassProblem(DiagonalGaussian([0], [1], 0.3), DiagonalGaussian([1], [1], 0.3))
    with pytest.raises(ValueError):
        TwoClassProblem(DiagonalGaussian([0], [1]), DiagonalGaussian([1, 0], [1, 1]))


gauss = st.builds(
    lambda m, v: DiagonalGaussian(m, v),
    st.lists(st.floats(-2, 2), min_size=2, max_size=2),
    st.lists(st.floats(0.1, 3), min_size=2, max_size=2),
)


@settings(max_examples=40, deadline=None)
@given(gauss, gauss, st.integers(1, 3))
def test_delta_antisymmetric_under_swap(a, b, d):
    prob = TwoClassProblem(a, b)
    idx = enumerate_indices(2, d, mode="range")
    np.testing.assert_array_equal(delta_vector(prob, idx).values, -delta_vector(prob.swapped(), idx).values)


@settings(max_examples=40, deadline=None)
@given(gauss, st.integers(1, 4))
def test_equal_classes_have_zero_delta(a, d):
    prob = TwoClassProblem(a, DiagonalGaussian(a.mean, a.var))
    assert np.all(delta_vector(prob, enumerate_indices(2, d, mode="range")).values == 0.0)


@settings(max_examples=40, deadline=None)
@given(gauss, gauss, st.integers(1, 3))
def test_pooled_covariance_symmetric_psd(a, b, d):
    W = np.asarray(pooled_covariance(TwoClassProblem(a, b), enumerate_indices(2, d, mode="range")))
    assert np.max(np.abs(W - W.T)) <= 1e-14
    assert np.linalg.eigvalsh(W).min() >= -1e-10
