"""Dense and Krylov eigensolvers."""

import numpy as np
import pytest
import scipy.sparse as sp

from twistlab.solvers import (
    DENSE_DIM_GUARD,
    SolverError,
    diagonalize_dense,
    diagonalize_extremal,
    expectation,
)


def random_sym(rng, dim):
    A = rng.normal(size=(dim, dim))
    return (A + A.T) / 2


def test_dense_matches_numpy():
    rng = np.random.default_rng(0)
    A = random_sym(rng, 12)
    res = diagonalize_dense(A)
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(A), atol=1e-12)
    # eigenvector residuals
    for i in range(12):
        v = res.eigenvectors[:, i]
        np.testing.assert_allclose(A @ v, res.eigenvalues[i] * v, atol=1e-9)


def test_dense_accepts_sparse_input():
    rng = np.random.default_rng(1)
    A = random_sym(rng, 8)
    res = diagonalize_dense(sp.csr_matrix(A), compute_vectors=False)
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(A), atol=1e-12)
    assert res.eigenvectors is None


def test_extremal_matches_dense():
    rng = np.random.default_rng(2)
    A = random_sym(rng, 80)
    k = 5
    res = diagonalize_extremal(sp.csr_matrix(A), k=k)
    exact = np.linalg.eigvalsh(A)[:k]
    np.testing.assert_allclose(res.eigenvalues, exact, atol=1e-9)


def test_extremal_small_fallback():
    rng = np.random.default_rng(3)
    A = random_sym(rng, 6)
    res = diagonalize_extremal(A, k=2)
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(A)[:2], atol=1e-10)


def test_variational_bound():
    rng = np.random.default_rng(4)
    A = random_sym(rng, 40)
    e0 = diagonalize_extremal(sp.csr_matrix(A), k=1).ground_energy
    for _ in range(10):
        v = rng.normal(size=40)
        v /= np.linalg.norm(v)
        assert expectation(v, A) >= e0 - 1e-9


def test_permutation_invariance():
    rng = np.random.default_rng(5)
    A = random_sym(rng, 30)
    perm = rng.permutation(30)
    B = A[np.ix_(perm, perm)]
    np.testing.assert_allclose(
        diagonalize_dense(A, compute_vectors=False).eigenvalues,
        diagonalize_dense(B, compute_vectors=False).eigenvalues,
        atol=1e-10,
    )


def test_guards_and_errors():
    with pytest.raises(ValueError):
        diagonalize_extremal(np.eye(4), k=4)
    with pytest.raises(ValueError):
        diagonalize_extremal(np.eye(4), k=0)
    big = sp.identity(DENSE_DIM_GUARD * 2, format="csr")
    with pytest.raises(SolverError):
        diagonalize_dense(big)
    with pytest.raises(TypeError):
        diagonalize_dense("not a matrix")


def test_normalized_eigenvalues_and_gap():
    res = diagonalize_dense(np.diag([3.0, 5.0, 9.0]))
    np.testing.assert_allclose(res.normalized_eigenvalues, [0, 2, 6])
    assert np.isclose(res.gap(), 2.0)


def test_expectation_shape_check():
    with pytest.raises(ValueError):
        expectation(np.ones(3), np.eye(4))
