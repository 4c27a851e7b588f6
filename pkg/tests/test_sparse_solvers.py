import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from radden.errors import ConfigError, DomainError
from radden.sparse_solvers import (IstaOptions, default_ridge, ista_solve,
                                   lipschitz_bound, soft_threshold,
                                   solve_least_squares)

finite_floats = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def coordinate_descent_lasso(D, Y, mu, iters=3000, tol=1e-12):
    """Independent lasso oracle for ||Y - D Z||_F^2 + mu |Z|_1."""
    n, k = D.shape
    Z = np.zeros((k, Y.shape[1]))
    col_sq = np.sum(D * D, axis=0)
    for _ in range(iters):
        Z_old = Z.copy()
        for j in range(k):
            if col_sq[j] == 0:
                continue
            R_j = Y - D @ Z + np.outer(D[:, j], Z[j])
            rho = D[:, j] @ R_j
            Z[j] = np.sign(rho) * np.maximum(np.abs(rho) - mu / 2.0, 0.0) / col_sq[j]
        if np.max(np.abs(Z - Z_old)) < tol:
            break
    return Z


def lasso_objective(D, Y, Z, mu):
    return float(np.sum((Y - D @ Z) ** 2) + mu * np.sum(np.abs(Z)))


class TestSoftThreshold:
    def test_definition(self):
        np.testing.assert_allclose(
            soft_threshold(np.array([3.0, -0.5, 1.0]), 1.0), [2.0, 0.0, 0.0]
        )

    def test_zero_threshold_is_identity(self):
        v = np.array([1.5, -2.0, 0.0, 7.0])
        np.testing.assert_array_equal(soft_threshold(v, 0.0), v)

    def test_full_shrinkage(self):
        v = np.array([0.5, -0.9, 0.1])
        np.testing.assert_array_equal(soft_threshold(v, 1.0), np.zeros(3))

    def test_negative_threshold_rejected(self):
        with pytest.raises(DomainError):
            soft_threshold(np.ones(3), -0.1)

    @given(arrays(float, 6, elements=finite_floats),
           arrays(float, 6, elements=finite_floats),
           st.floats(0, 100))
    def test_one_lipschitz(self, u, v, theta):
        du = np.linalg.norm(soft_threshold(u, theta) - soft_threshold(v, theta))
        assert du <= np.linalg.norm(u - v) + 1e-9

    @given(arrays(float, 6, elements=finite_floats), st.floats(0, 100))
    def test_odd(self, v, theta):
        np.testing.assert_allclose(
            soft_threshold(-v, theta), -soft_threshold(v, theta), atol=1e-12
        )


class TestLeastSquares:
    def test_identity_design(self):
        B = np.random.default_rng(0).standard_normal((3, 4))
        W = solve_least_squares(np.eye(4), B, ridge=0.0)
        np.testing.assert_allclose(W, B, atol=1e-12)

    def test_normal_equations_oracle(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((5, 20))
        B = rng.standard_normal((3, 20))
        W = solve_least_squares(A, B, ridge=0.0)
        grad = B @ A.T - W @ (A @ A.T)
        assert np.linalg.norm(grad) < 1e-8 * np.linalg.norm(B @ A.T)

    def test_ridge_limit_shrinks(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((4, 10))
        B = rng.standard_normal((4, 10))
        norms = [np.linalg.norm(solve_least_squares(A, B, ridge=r))
                 for r in (1e-6, 1.0, 1e3, 1e6)]
        assert all(a >= b for a, b in zip(norms, norms[1:]))
        assert norms[-1] < 1e-3

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigError):
            solve_least_squares(np.ones((2, 3)), np.ones((2, 4)))

    def test_non_finite_rejected(self):
        A = np.ones((2, 2))
        A[0, 0] = np.nan
        with pytest.raises(DomainError):
            solve_least_squares(A, np.ones((2, 2)))

    def test_minimizer_cannot_be_improved(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((6, 12))
        B = rng.standard_normal((4, 12))
        ridge = default_ridge(A)
        W = solve_least_squares(A, B, ridge=ridge)

        def obj(M):
            return np.sum((B - M @ A) ** 2) + ridge * np.sum(M * M)

        base = obj(W)
        for _ in range(100):
            D = rng.standard_normal(W.shape)
            D /= np.linalg.norm(D)
            assert obj(W + 1e-3 * D) >= base - 1e-12

    def test_dual_and_primal_sides_agree(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((30, 8))   # tall: dual side kicks in
        B = rng.standard_normal((5, 8))
        W_dual = solve_least_squares(A, B, ridge=1e-6)
        G = A @ A.T + 1e-6 * np.eye(30)
        W_primal = np.linalg.solve(G, A @ B.T).T
        np.testing.assert_allclose(W_dual, W_primal, atol=1e-8)


class TestLipschitzBound:
    def test_scaled_identity(self):
        L = lipschitz_bound(2.0 * np.eye(6))
        assert 4.0 <= L <= 4.05

    def test_known_diagonal(self):
        L = lipschitz_bound(np.diag([1.0, 3.0]))
        assert 9.0 <= L <= 9.1

    def test_dense_eigensolver_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            A = rng.standard_normal((10, 10))
            L = lipschitz_bound(A)
            s_max = np.linalg.svd(A, compute_uv=False)[0]
            assert L >= s_max ** 2 * (1 - 1e-9)
            assert L <= s_max ** 2 * 1.02

    def test_zero_matrix_floor(self):
        assert 0 < lipschitz_bound(np.zeros((4, 4))) < 1e-9


class TestIsta:
    def _well_conditioned(self, rng, n):
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        return Q @ np.diag(rng.uniform(0.5, 1.5, n)) @ Q.T

    def test_mu_zero_matches_direct_solve(self):
        rng = np.random.default_rng(6)
        D = self._well_conditioned(rng, 5)
        Y = rng.standard_normal((5, 3))
        opts = IstaOptions(max_iterations=5000, relative_tolerance=1e-14)
        Z = ista_solve(D, Y, 0.0, np.zeros((5, 3)), opts).z
        Z_direct = np.linalg.solve(D, Y)
        np.testing.assert_allclose(Z, Z_direct, atol=1e-6)

    def test_orthonormal_design_one_step_closed_form(self):
        rng = np.random.default_rng(7)
        y = rng.standard_normal((6, 1))
        mu = 0.8
        opts = IstaOptions(max_iterations=2000, relative_tolerance=1e-14)
        Z = ista_solve(np.eye(6), y, mu, np.zeros((6, 1)), opts).z
        expected = np.sign(y) * np.maximum(np.abs(y) - mu / 2.0, 0.0)
        np.testing.assert_allclose(Z, expected, atol=1e-9)

    def test_coordinate_descent_oracle(self):
        rng = np.random.default_rng(8)
        D = rng.standard_normal((8, 5))
        Y = rng.standard_normal((8, 1))
        mu = 0.3
        opts = IstaOptions(max_iterations=20000, relative_tolerance=1e-14)
        Z = ista_solve(D, Y, mu, np.zeros((5, 1)), opts).z
        Z_cd = coordinate_descent_lasso(D, Y, mu)
        assert abs(lasso_objective(D, Y, Z, mu)
                   - lasso_objective(D, Y, Z_cd, mu)) < 1e-5

    def test_objective_monotone(self):
        rng = np.random.default_rng(9)
        D = rng.standard_normal((12, 7))
        Y = rng.standard_normal((12, 4))
        res = ista_solve(D, Y, 0.5, rng.standard_normal((7, 4)),
                         IstaOptions(max_iterations=300, relative_tolerance=1e-12))
        diffs = np.diff(res.objectives)
        assert np.all(diffs <= 1e-10)

    def test_column_partition_invariance(self):
        rng = np.random.default_rng(10)
        D = rng.standard_normal((9, 4))
        Y = rng.standard_normal((9, 3))
        Z0 = np.zeros((4, 3))
        opts = IstaOptions(max_iterations=50, relative_tolerance=1e-300)
        full = ista_solve(D, Y, 0.2, Z0, opts).z
        cols = [ista_solve(D, Y[:, [j]], 0.2, Z0[:, [j]], opts).z
                for j in range(3)]
        np.testing.assert_array_equal(full, np.hstack(cols))

    def test_negative_mu_rejected(self):
        with pytest.raises(DomainError):
            ista_solve(np.eye(2), np.ones((2, 1)), -1.0, np.zeros((2, 1)))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            ista_solve(np.eye(3), np.ones((2, 1)), 0.1, np.zeros((3, 1)))
