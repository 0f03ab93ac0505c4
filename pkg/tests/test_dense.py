import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homcone.dense import (
    DEFAULT_TOL,
    Tolerance,
    as_symmetric,
    cholesky_type,
    frobenius_inner,
    is_positive_definite,
    matrix_rank,
)
from homcone.exceptions import DimensionMismatch, NotPSD

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def test_tolerance_rejects_nonpositive():
    with pytest.raises(ValueError):
        Tolerance(0.0, 1e-9)
    with pytest.raises(ValueError):
        Tolerance(1e-9, -1.0)
    assert DEFAULT_TOL.threshold(10.0) == pytest.approx(1e-9 + 1e-8)


def test_cholesky_identity():
    np.testing.assert_array_equal(cholesky_type(np.eye(3)), np.eye(3))


def test_cholesky_two_by_two():
    X = np.array([[4.0, 2.0], [2.0, 2.0]])
    T = cholesky_type(X)
    np.testing.assert_allclose(T, [[2.0, 1.0], [0.0, 1.0]])
    np.testing.assert_allclose(T.T @ T, X)


def test_cholesky_rank_one_zeroes_rows():
    X = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 1.0]])
    T = cholesky_type(X)
    np.testing.assert_allclose(T, [[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPSD):
        cholesky_type(np.diag([1.0, -1.0]))
    with pytest.raises(NotPSD):
        # zero pivot with a nonzero off-diagonal entry
        cholesky_type(np.array([[0.0, 1.0], [1.0, 1.0]]))


def test_as_symmetric_rejects_asymmetric():
    with pytest.raises(ValueError):
        as_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatch):
        as_symmetric(np.ones((2, 3)))


@pytest.mark.parametrize(
    "X, expected",
    [
        (np.eye(2), True),
        (np.diag([1.0, 0.0]), False),
        (np.array([[2.0, 0.0, 1.0], [0.0, 2.0, 1.0], [1.0, 1.0, 2.0]]), True),
        (np.array([[1.0, 2.0], [2.0, 1.0]]), False),
        (np.ones((2, 3)), False),
    ],
)
def test_is_positive_definite(X, expected):
    assert is_positive_definite(X) is expected


@pytest.mark.parametrize("X, r", [(np.zeros((3, 3)), 0), (np.eye(4), 4), (np.ones((3, 3)), 1)])
def test_matrix_rank(X, r):
    assert matrix_rank(X) == r


def test_frobenius_inner():
    assert frobenius_inner(np.eye(3), np.eye(3)) == 3.0
    assert frobenius_inner(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0.0
    assert frobenius_inner([[1, 2], [2, 0]], [[0, 1], [1, 3]]) == 4.0
    with pytest.raises(DimensionMismatch):
        frobenius_inner(np.eye(2), np.eye(3))


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_cholesky_reconstructs_gram_matrices(G):
    X = G.T @ G
    T = cholesky_type(X)
    assert np.linalg.norm(T.T @ T - X) <= 1e-8 * (1 + np.linalg.norm(X))
    assert np.all(np.diag(T) >= 0)
    assert np.allclose(np.tril(T, -1), 0)
    for i in range(T.shape[0]):
        if T[i, i] == 0:
            assert not np.any(T[i])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_positive_definiteness_of_perturbed_and_deficient_grams(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    assert is_positive_definite(G.T @ G + 1e-3 * np.eye(n))
    H = rng.standard_normal((n - 1, n))
    assert not is_positive_definite(H.T @ H)


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.integers(1, 7), elements=finite).filter(lambda x: np.max(np.abs(x)) > 1e-2))
def test_rank_of_outer_product_is_one(x):
    assert matrix_rank(np.outer(x, x)) == 1
