import numpy as np
import pytest

from oracles import ols_coefficients, ridge_closed_form
from ovisat.errors import SingularDesign, TooFewSamples
from ovisat.models import (
    RidgeConfig,
    fit_ols,
    fit_ridge,
    predict,
    ridge_solve,
    solve_spd,
)


class TestOls:
    def test_exact_line(self):
        m = fit_ols(np.array([[1.0], [2.0], [3.0]]), np.array([2.0, 4.0, 6.0]))
        assert m.coef[0] == pytest.approx(2.0, abs=1e-10)
        assert m.intercept == pytest.approx(0.0, abs=1e-10)

    def test_constant_target(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(20, 3))
        m = fit_ols(X, np.full(20, 7.5))
        assert m.intercept == pytest.approx(7.5, abs=1e-9)
        assert np.max(np.abs(m.coef)) < 1e-9

    def test_matches_lstsq_oracle(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(50, 5))
        y = X @ rng.normal(size=5) + 0.3 + rng.normal(0, 0.5, 50)
        m = fit_ols(X, y)
        coef, intercept = ols_coefficients(X, y)
        assert np.max(np.abs(m.coef - coef)) < 1e-8
        assert m.intercept == pytest.approx(intercept, abs=1e-8)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(40, 4))
        y = rng.normal(size=40)
        m = fit_ols(X, y)
        resid = y - predict(m, X)
        A = np.column_stack([np.ones(40), X])
        assert np.max(np.abs(A.T @ resid)) < 1e-8

    def test_singular_design(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=20)
        X = np.column_stack([x, 2.0 * x])  # exactly collinear
        with pytest.raises(SingularDesign):
            fit_ols(X, rng.normal(size=20))

    def test_too_few_rows(self):
        with pytest.raises(TooFewSamples):
            fit_ols(np.ones((2, 3)), np.ones(2))

    def test_predict_trivials(self):
        m = fit_ols(np.array([[1.0], [2.0], [3.0]]), np.array([2.0, 4.0, 6.0]))
        assert predict(m, [[3.0]])[0] == pytest.approx(6.0, abs=1e-9)
        assert predict(m, np.empty((0, 1))).shape == (0,)


class TestRidge:
    def test_lambda_zero_equals_ols(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(30, 4))
        y = rng.normal(size=30)
        ols = fit_ols(X, y)
        ridge = fit_ridge(X, y, RidgeConfig(lambda_grid=(0.0,)))
        assert np.max(np.abs(ols.coef - ridge.coef)) < 1e-10
        assert ols.intercept == pytest.approx(ridge.intercept, abs=1e-10)

    def test_heavy_shrinkage(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(30, 4))
        y = X @ np.array([3.0, -2.0, 1.0, 0.5]) + 1.0
        m = fit_ridge(X, y, RidgeConfig(lambda_grid=(1e9,)))
        assert np.max(np.abs(m.coef)) < 1e-6

    def test_closed_form_3x1_lambda_one(self):
        X = np.array([[1.0], [2.0], [4.0]])
        y = np.array([1.0, 2.0, 3.0])
        m = fit_ridge(X, y, RidgeConfig(lambda_grid=(1.0,)))
        coef, intercept = ridge_closed_form(X, y, 1.0)
        assert m.coef[0] == pytest.approx(coef[0], abs=1e-10)
        assert m.intercept == pytest.approx(intercept, abs=1e-10)

    def test_solution_norm_non_increasing_in_lambda(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(40, 5))
        y = rng.normal(size=40)
        norms = [
            np.linalg.norm(ridge_solve(X, y, lam)[0])
            for lam in (0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1e4)
        ]
        assert all(a >= b - 1e-12 for a, b in zip(norms, norms[1:]))

    def test_cv_picks_generalizing_lambda(self):
        # ill-posed noisy design: tiny lambdas overfit the early folds
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 5))
        X[:, 4] = X[:, 3] + rng.normal(0, 1e-3, 60)
        y = X[:, 0] + rng.normal(0, 2.0, 60)
        m = fit_ridge(X, y, RidgeConfig(lambda_grid=(1e-8, 1.0, 10.0)))
        assert m.best_lambda in (1.0, 10.0)

    def test_default_grid_is_pow10(self):
        cfg = RidgeConfig()
        assert cfg.lambda_grid == tuple(10.0 ** k for k in range(-4, 3))


class TestSolveSpd:
    def test_matches_numpy_solve(self):
        rng = np.random.default_rng(8)
        A = rng.normal(size=(6, 6))
        S = A @ A.T + 6 * np.eye(6)
        b = rng.normal(size=6)
        assert np.max(np.abs(solve_spd(S, b) - np.linalg.solve(S, b))) < 1e-9

    def test_rejects_indefinite(self):
        with pytest.raises(SingularDesign):
            solve_spd(np.array([[1.0, 2.0], [2.0, 1.0]]), np.ones(2))
