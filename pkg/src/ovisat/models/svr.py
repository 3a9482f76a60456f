"""Epsilon-insensitive support vector regression with an RBF kernel.

The dual is solved by sequential pairwise optimization on the 2n-vector
(alpha, alpha*): each iteration picks the maximal KKT-violating pair,
solves the two-variable subproblem under the equality constraint
sum(alpha - alpha*) = 0, and clips the step to the [0, C] box. The
stopping rule is the standard violation gap m - M <= tol; the bias is
the midpoint of the feasible interval at exit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import LengthMismatch, NoConvergence, TooFewSamples
from .base import TrainedModel, as_matrix, as_vector, default_feature_names
from .config import SvrConfig


def rbf_kernel(a, b, gamma: float) -> float:
    """exp(-gamma * ||a - b||^2)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"shapes {a.shape} and {b.shape} differ")
    d = a - b
    return float(np.exp(-gamma * np.dot(d, d)))


def _kernel_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise RBF kernel between the rows of A and B."""
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass(frozen=True)
class SvrModel(TrainedModel):
    support_x: np.ndarray = field(repr=False, default=None)
    dual_coef: np.ndarray = field(repr=False, default=None)  # alpha_i - alpha_i*
    intercept: float = 0.0
    # full dual vectors, kept for diagnostics; not restored by loading
    alpha: np.ndarray | None = field(repr=False, default=None)
    alpha_star: np.ndarray | None = field(repr=False, default=None)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        if len(self.dual_coef) == 0:
            return np.full(X.shape[0], self.intercept)
        K = _kernel_matrix(X, self.support_x, self.config.gamma)
        return K @ self.dual_coef + self.intercept


def svr_dual_objective(
    X, y, config: SvrConfig, alpha: np.ndarray, alpha_star: np.ndarray
) -> float:
    """Dual objective (minimization form) at the given dual point."""
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    beta = np.asarray(alpha, dtype=float) - np.asarray(alpha_star, dtype=float)
    K = _kernel_matrix(X, X, config.gamma)
    return float(
        0.5 * beta @ K @ beta
        + config.epsilon * (np.sum(alpha) + np.sum(alpha_star))
        - y @ beta
    )


def fit_svr(X, y, config: SvrConfig | None = None, feature_names=None) -> SvrModel:
    """Train by maximal-violating-pair updates on the dual."""
    config = config or SvrConfig()
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    n = X.shape[0]
    if n < 1:
        raise TooFewSamples("need at least one training row")

    C, eps, tol = config.c, config.epsilon, config.tol
    K = _kernel_matrix(X, X, config.gamma)

    # theta stacks (alpha, alpha*); sign +1 for alpha, -1 for alpha*
    theta = np.zeros(2 * n)
    beta = np.zeros(n)
    sign = np.concatenate([np.ones(n), -np.ones(n)])
    grad = np.concatenate([eps - y, eps + y])

    def violation_bounds():
        """(m, i, M, j): largest ascent/descent candidates and their gap."""
        viol = -sign * grad
        up = np.where(sign > 0, theta < C, theta > 0)
        low = np.where(sign > 0, theta > 0, theta < C)
        m, i = -np.inf, -1
        if up.any():
            i = int(np.flatnonzero(up)[np.argmax(viol[up])])
            m = viol[i]
        M, j = np.inf, -1
        if low.any():
            j = int(np.flatnonzero(low)[np.argmin(viol[low])])
            M = viol[j]
        return m, i, M, j

    m, i, M, j = violation_bounds()
    converged = m - M <= tol
    for _ in range(config.max_passes):
        if converged:
            break
        ii, jj = i % n, j % n
        eta = K[ii, ii] + K[jj, jj] - 2.0 * K[ii, jj]
        if eta <= 0.0:
            eta = 1e-12
        delta = (m - M) / eta
        lim_i = C - theta[i] if sign[i] > 0 else theta[i]
        lim_j = theta[j] if sign[j] > 0 else C - theta[j]
        delta = min(delta, lim_i, lim_j)

        theta[i] += sign[i] * delta
        theta[j] -= sign[j] * delta
        # snap rounding residue so the box holds exactly
        theta[i] = min(max(theta[i], 0.0), C)
        theta[j] = min(max(theta[j], 0.0), C)
        beta[ii] += delta
        beta[jj] -= delta
        kdiff = (K[:, ii] - K[:, jj]) * delta
        grad[:n] += kdiff
        grad[n:] -= kdiff

        m, i, M, j = violation_bounds()
        converged = m - M <= tol
    if not converged:
        raise NoConvergence(
            f"SVR did not reach tol={tol} within {config.max_passes} updates "
            f"(final KKT violation {m - M:.3e})",
            violation=float(m - M),
        )

    b = 0.0 if np.isinf(m) or np.isinf(M) else (m + M) / 2.0
    alpha, alpha_star = theta[:n].copy(), theta[n:].copy()
    sv = np.flatnonzero(beta != 0.0)
    return SvrModel(
        config=config,
        feature_names=tuple(feature_names or default_feature_names(X.shape[1])),
        support_x=X[sv].copy(),
        dual_coef=beta[sv].copy(),
        intercept=float(b),
        alpha=alpha,
        alpha_star=alpha_star,
    )
