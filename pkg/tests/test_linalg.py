"""SVD kernel: reconstruction, orthonormality, determinism, conventions."""

import numpy as np
import pytest

from cellca import InvalidMatrix, decompose, svd


def reconstruction_error(a, fact):
    scale = np.abs(a).max() or 1.0
    return np.abs(fact.u @ np.diag(fact.sigma) @ fact.v.T - a).max() / scale


def orthonormality_error(fact):
    k = fact.sigma.size
    return max(np.abs(fact.u.T @ fact.u - np.eye(k)).max(),
               np.abs(fact.v.T @ fact.v - np.eye(k)).max())


def test_identity_matrix():
    fact = svd(np.eye(3))
    assert np.array_equal(fact.sigma, np.ones(3))
    assert np.array_equal(fact.u, np.eye(3))
    assert np.array_equal(fact.v, np.eye(3))


def test_negative_scalar():
    fact = svd(np.array([[-2.0]]))
    assert fact.sigma[0] == 2.0
    assert fact.u[0, 0] == 1.0  # sign rule puts the flip on v
    assert fact.u[0, 0] * fact.sigma[0] * fact.v[0, 0] == -2.0


def test_block_table_leading_singular_value(block_table):
    # an exact two-block table has a leading singular value of exactly 1
    fact = svd(decompose(block_table).s)
    assert abs(fact.sigma[0] - 1.0) <= 1e-6


def test_random_5x4_contract():
    rng = np.random.default_rng(5)
    a = rng.random((5, 4))
    fact = svd(a)
    assert reconstruction_error(a, fact) <= 1e-9
    assert orthonormality_error(fact) <= 1e-10


@pytest.mark.parametrize("shape", [(1, 1), (3, 3), (7, 2), (2, 7), (12, 9), (4, 10)])
def test_contracts_over_random_matrices(shape):
    rng = np.random.default_rng(hash(shape) % 2**32)
    for trial in range(20):
        a = rng.standard_normal(shape) * 10.0 ** rng.integers(-3, 4)
        fact = svd(a)
        assert reconstruction_error(a, fact) <= 1e-9
        assert orthonormality_error(fact) <= 1e-10
        assert np.all(np.diff(fact.sigma) <= 0)
        assert np.all(fact.sigma >= 0)
        # singular values against the LAPACK route
        ref = np.linalg.svd(a, compute_uv=False)
        scale = max(ref[0], 1e-300)
        assert np.abs(fact.sigma - ref).max() / scale <= 1e-12
        # sign rule: largest-|.| entry of each u column is nonnegative
        for k in range(fact.sigma.size):
            assert fact.u[np.argmax(np.abs(fact.u[:, k])), k] >= 0


def test_bitwise_determinism():
    rng = np.random.default_rng(11)
    a = rng.random((8, 5))
    f1 = svd(a)
    f2 = svd(a.copy())
    assert np.array_equal(f1.u, f2.u)
    assert np.array_equal(f1.sigma, f2.sigma)
    assert np.array_equal(f1.v, f2.v)


def test_singular_values_permutation_invariant():
    rng = np.random.default_rng(12)
    a = rng.random((6, 4))
    base = svd(a).sigma
    assert np.abs(svd(a[::-1]).sigma - base).max() <= 1e-10
    assert np.abs(svd(a[:, ::-1]).sigma - base).max() <= 1e-10


def test_zero_matrix_and_rank_deficiency():
    fact = svd(np.zeros((3, 2)))
    assert np.array_equal(fact.sigma, np.zeros(2))
    assert orthonormality_error(fact) == 0.0

    rng = np.random.default_rng(13)
    a = rng.random((6, 4))
    a[:, 3] = a[:, 1]  # duplicate column
    fact = svd(a)
    assert fact.sigma[-1] <= 1e-12 * fact.sigma[0]
    assert reconstruction_error(a, fact) <= 1e-9
    assert orthonormality_error(fact) <= 1e-10


def test_non_finite_input_rejected():
    with pytest.raises(InvalidMatrix):
        svd(np.array([[1.0, np.nan]]))
    with pytest.raises(InvalidMatrix):
        svd(np.array([[np.inf], [1.0]]))
    with pytest.raises(InvalidMatrix):
        svd(np.zeros((0, 3)))
