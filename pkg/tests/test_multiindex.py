import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popkda.multiindex import (IndexSet, MultiIndex, enumerate_indices, monomial_eval, monomials,
                               multinomial)


def test_s2_in_three_dimensions_order():
    got = [tuple(j) for j in enumerate_indices(3, 2)]
    assert got == [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def test_degree_zero_is_the_zero_index():
    assert [tuple(j) for j in enumerate_indices(2, 0)] == [(0, 0)]


def test_range_size():
    idx = enumerate_indices(2, 3, mode="range")
    assert len(idx) == math.comb(5, 3) - 1 == 9
    assert list(idx.degrees) == [1, 1, 2, 2, 2, 3, 3, 3, 3]


def test_multinomial_examples():
    assert multinomial(2, (1, 1)) == 2
    assert multinomial(3, (3, 0)) == 1
    assert multinomial(4, (2, 2)) == 6


def test_multinomial_degree_mismatch():
    with pytest.raises(ValueError):
        multinomial(3, (1, 1))


def test_multinomial_refuses_large_degree():
    with pytest.raises(ValueError):
        multinomial(21, (21, 0))


def test_monomial_examples():
    assert monomial_eval((2, 3), (1, 2)) == 18
    assert monomial_eval((5, -1), (0, 0)) == 1
    assert monomial_eval((0, 2), (0, 3)) == 8
    assert monomial_eval((0.0,), (0,)) == 1  # 0^0 := 1


def test_monomial_length_mismatch():
    with pytest.raises(ValueError):
        monomial_eval((1, 2, 3), (1, 1))


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        MultiIndex((1, -1))


def test_multiindex_addition_is_componentwise():
    assert MultiIndex((1, 2)) + MultiIndex((3, 0)) == (4, 2)
    assert MultiIndex((2, 1)).degree == 3
    assert MultiIndex((2, 3)).factorial == 12


def test_index_set_round_trip_and_position():
    idx = enumerate_indices(3, 3, mode="range")
    assert IndexSet.from_dict(idx.to_dict()) == idx
    for k, j in enumerate(idx):
        assert idx.position(j) == k
    assert enumerate_indices(2, 2).labels() == ["x1^2", "x1*x2", "x2^2"]


def test_design_matrix_matches_pointwise(rng):
    X = rng.normal(size=(7, 3))
    idx = enumerate_indices(3, 4, mode="range")
    M = monomials(X, idx)
    for r in range(X.shape[0]):
        for c, j in enumerate(idx):
            assert M[r, c] == pytest.approx(monomial_eval(X[r], j), rel=1e-12)


@given(st.integers(1, 5), st.integers(0, 8))
def test_exact_cardinality(p, d):
    idx = enumerate_indices(p, d)
    assert len(idx) == math.comb(d + p - 1, d)
    assert len(set(idx)) == len(idx)
    assert all(j.degree == d for j in idx)


@given(st.integers(1, 4), st.integers(1, 6))
def test_range_cardinality_and_grading(p, d):
    idx = enumerate_indices(p, d, mode="range")
    assert len(idx) == math.comb(p + d, d) - 1
    assert np.all(np.diff(idx.degrees) >= 0)


@given(st.integers(1, 4), st.integers(0, 6))
def test_multinomial_theorem_at_ones(p, d):
    assert sum(multinomial(d, j) for j in enumerate_indices(p, d)) == p**d


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(0, 6),
       st.lists(st.floats(-2, 2, allow_nan=False), min_size=4, max_size=4))
def test_multinomial_expansion(p, d, xs):
    x = np.array(xs[:p])
    lhs = x.sum() ** d
    rhs = sum(multinomial(d, j) * monomial_eval(x, j) for j in enumerate_indices(p, d))
    scale = sum(multinomial(d, j) * abs(monomial_eval(x, j)) for j in enumerate_indices(p, d))
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1.0)
