import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popkda.eigen import SingularWithinClass, brute_force_geig, default_sample_ridge, orient, rank_one_geig


def random_instance(rng, dim):
    A = rng.normal(size=(dim, dim))
    return rng.normal(size=dim), A @ A.T + 0.1 * np.eye(dim)


def test_scenario_one_linear_example():
    sol = rank_one_geig([1.6, 2.1], np.eye(2))
    assert sol.lam == pytest.approx(6.97, abs=1e-12)
    np.testing.assert_allclose(sol.nu, [0.6060, 0.7954], atol=1e-4)
    assert not sol.degenerate


def test_zero_delta_is_degenerate():
    sol = rank_one_geig([0.0, 0.0, 0.0], np.diag([1.0, 2.0, 3.0]))
    assert sol.degenerate and sol.lam == 0.0
    assert np.all(sol.nu == 0)


def test_unit_example():
    sol = rank_one_geig([1.0, 0.0, 0.0], np.eye(3))
    assert sol.lam == pytest.approx(1.0)
    np.testing.assert_allclose(sol.nu, [1, 0, 0], atol=1e-15)


def test_brute_force_trivial_cases():
    vals, _ = brute_force_geig(np.zeros((3, 3)), np.eye(3))
    np.testing.assert_allclose(vals, 0, atol=1e-15)
    vals, _ = brute_force_geig(np.eye(3), np.eye(3))
    np.testing.assert_allclose(vals, 1, atol=1e-14)


def test_brute_force_rejects_indefinite():
    with pytest.raises(ValueError):
        brute_force_geig(np.eye(2), np.diag([1.0, -1.0]))


def test_dim_five_oracle(rng):
    delta, W = random_instance(rng, 5)
    sol = rank_one_geig(delta, W)
    vals, V = brute_force_geig(np.outer(delta, delta), W)
    assert sol.lam == pytest.approx(vals[0], rel=1e-10)
    assert abs(sol.nu @ V[:, 0]) == pytest.approx(1.0, abs=1e-10)


def test_singular_within_class_names_ridge():
    W = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(SingularWithinClass) as err:
        rank_one_geig([1.0, 0.0], W, ridge=0.0)
    assert err.value.ridge == 0.0
    assert "ridge" in str(err.value)
    sol = rank_one_geig([1.0, 0.0], W, ridge=1e-3)
    assert sol.ridge_used == 1e-3


def test_input_validation():
    with pytest.raises(ValueError):
        rank_one_geig([1.0, 2.0], np.eye(3))
    with pytest.raises(ValueError):
        rank_one_geig([1.0, 2.0], np.eye(2), ridge=-1.0)


def test_orientation_and_default_ridge():
    np.testing.assert_array_equal(orient([0.1, -0.5]), [-0.1, 0.5])
    assert default_sample_ridge(np.diag([2.0, 4.0])) == pytest.approx(3e-8)


def test_moment_scale_matrix_is_factorable():
    # wildly different variances; scaling keeps the solve well conditioned
    W = np.diag([1e-6, 1.0, 1e6])
    sol = rank_one_geig([1e-3, 1.0, 1e3], W)
    assert sol.lam == pytest.approx(3.0, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_oracle_equivalence(dim, seed):
    delta, W = random_instance(np.random.default_rng(seed), dim)
    sol = rank_one_geig(delta, W)
    vals, V = brute_force_geig(np.outer(delta, delta), W)
    assert abs(sol.lam - vals[0]) <= 1e-8 * max(1.0, vals[0])
    assert abs(abs(sol.nu @ V[:, 0]) - 1.0) <= 1e-8
    assert np.linalg.norm(sol.nu) == pytest.approx(1.0, abs=1e-12)
    assert sol.nu[np.argmax(np.abs(sol.nu))] > 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1),
       st.lists(st.floats(0, 10), min_size=2, max_size=6))
def test_ridge_monotone(dim, seed, ridges):
    delta, W = random_instance(np.random.default_rng(seed), dim)
    lams = [rank_one_geig(delta, W, r).lam for r in sorted(ridges)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(lams, lams[1:]))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_scale_equivariance(dim, seed):
    rng = np.random.default_rng(seed)
    delta, W = random_instance(rng, dim)
    d = rng.uniform(0.2, 5.0, dim)
    base = rank_one_geig(delta, W)
    scaled = rank_one_geig(d * delta, W * np.outer(d, d))
    assert scaled.lam == pytest.approx(base.lam, rel=1e-9)
    expect = orient(base.nu / d / np.linalg.norm(base.nu / d))
    np.testing.assert_allclose(scaled.nu, expect, atol=1e-8)
