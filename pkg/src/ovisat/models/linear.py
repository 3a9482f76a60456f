"""Ordinary least squares and ridge regression.

Both solve the normal equations through a hand-rolled Cholesky
factorization; the design here never exceeds a handful of columns, so
the O(p^3) solve is negligible. Ridge leaves the intercept unpenalized
by centering X and y before the regularized solve, and picks its lambda
by walk-forward cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch, SingularDesign, TooFewSamples
from ..splits import time_series_splits
from .base import TrainedModel, as_matrix, as_vector, default_feature_names
from .config import LinearConfig, RidgeConfig


@dataclass(frozen=True)
class LinearModel(TrainedModel):
    coef: np.ndarray = field(repr=False, default=None)
    intercept: float = 0.0
    best_lambda: float | None = None

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return X @ self.coef + self.intercept


def cholesky_factor(A: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = A; raises on non-SPD input."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    L = np.zeros_like(A)
    tiny = 1e-12 * max(1.0, float(np.max(np.abs(np.diag(A)))))
    for j in range(n):
        d = A[j, j] - np.dot(L[j, :j], L[j, :j])
        if d <= tiny:
            raise SingularDesign(f"non-positive pivot at column {j}")
        L[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (A[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
    return L

def solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for symmetric positive-definite A."""
    L = cholesky_factor(A)
    n = len(b)
    z = np.zeros(n)
    for i in range(n):  # forward: L z = b
        z[i] = (b[i] - np.dot(L[i, :i], z[:i])) / L[i, i]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):  # backward: L^T x = z
        x[i] = (z[i] - np.dot(L[i + 1:, i], x[i + 1:])) / L[i, i]
    return x


def fit_ols(X, y, feature_names=None) -> LinearModel:
    """Least squares fit with an internal intercept column."""
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    n, p = X.shape
    if n <= p:
        raise TooFewSamples(f"need rows > cols for OLS, got {n} x {p}")
    A = np.column_stack([np.ones(n), X])
    beta = solve_spd(A.T @ A, A.T @ y)
    return LinearModel(
        config=LinearConfig(),
        feature_names=tuple(feature_names or default_feature_names(p)),
        coef=beta[1:],
        intercept=float(beta[0]),
    )


def ridge_solve(X, y, lam: float) -> tuple[np.ndarray, float]:
    """Ridge coefficients at a fixed lambda, intercept unpenalized."""
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    Xc = X - x_mean
    yc = y - y_mean
    G = Xc.T @ Xc + lam * np.eye(X.shape[1])
    coef = solve_spd(G, Xc.T @ yc)
    return coef, y_mean - float(x_mean @ coef)


def fit_ridge(X, y, config: RidgeConfig | None = None, feature_names=None) -> LinearModel:
    """Ridge fit with lambda chosen by walk-forward cross-validation.

    Each grid lambda is scored by its mean validation MSE over the
    time-series folds; the winner (smallest lambda on ties) is refit on
    all rows. A single-element grid skips the fold machinery.
    """
    config = config or RidgeConfig()
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    n, p = X.shape
    if n <= p:
        raise TooFewSamples(f"need rows > cols for ridge, got {n} x {p}")

    grid = config.lambda_grid
    if len(grid) == 1:
        best = grid[0]
    else:
        k = min(config.cv_folds, n - 1)
        if k < 2:
            raise TooFewSamples(f"cannot cross-validate the lambda grid with n={n}")
        plans = time_series_splits(n, k)
        best, best_score = None, np.inf
        for lam in grid:  # grid is sorted ascending; strict < keeps smallest on ties
            scores = []
            for plan in plans:
                tr, te = plan.train, plan.test
                coef, intercept = ridge_solve(X[tr], y[tr], lam)
                resid = y[te] - (X[te] @ coef + intercept)
                scores.append(float(np.mean(resid ** 2)))
            score = float(np.mean(scores))
            if score < best_score:
                best, best_score = lam, score

    coef, intercept = ridge_solve(X, y, best)
    return LinearModel(
        config=config,
        feature_names=tuple(feature_names or default_feature_names(p)),
        coef=coef,
        intercept=intercept,
        best_lambda=float(best),
    )
