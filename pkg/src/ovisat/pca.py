"""Principal component analysis via cyclic Jacobi rotations.

The feature space here is tiny (at most a few dozen columns), so the
covariance matrix is diagonalized with plain Jacobi sweeps: robust,
dependency-free, and bit-deterministic. Components feed the neighbor
and tree regressors, which retain 5 and 2 of them respectively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateData, ShapeMismatch, TooManyComponents

_JACOBI_TOL = 1e-12  # off-diagonal norm, relative to the input's scale
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class PcaModel:
    """Fitted orthonormal basis: row i of `components` is component i."""

    means: np.ndarray = field(repr=False)
    components: np.ndarray = field(repr=False)
    explained_variance: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.means, self.components, self.explained_variance):
            arr.setflags(write=False)

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.components.shape[1]


def _jacobi_eigh(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted. Sweeps run
    until the off-diagonal Frobenius norm of the scaled matrix drops
    below 1e-12.
    """
    A = A.copy()
    n = A.shape[0]
    scale = np.sqrt(np.sum(A * A))
    if scale == 0.0:
        return np.zeros(n), np.eye(n)
    A /= scale
    V = np.eye(n)

    def off_norm(M):
        off = M - np.diag(np.diag(M))
        return np.sqrt(np.sum(off * off))

    for _ in range(_MAX_SWEEPS):
        if off_norm(A) < _JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # two-sided rotation in the (p, q) plane
                rows_p = A[p, :].copy()
                rows_q = A[q, :].copy()
                A[p, :] = c * rows_p - s * rows_q
                A[q, :] = s * rows_p + c * rows_q
                cols_p = A[:, p].copy()
                cols_q = A[:, q].copy()
                A[:, p] = c * cols_p - s * cols_q
                A[:, q] = s * cols_p + c * cols_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A) * scale, V


def fit_pca(X: np.ndarray, n_components: int) -> PcaModel:
    """Fit PCA on the rows of X, keeping the top n_components.

    Covariance uses divisor n-1. Eigenvalue order is non-increasing;
    each component's sign is fixed so its largest-magnitude entry is
    positive.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ShapeMismatch("X must be a matrix with >= 2 rows")
    n, d = X.shape
    if not 1 <= n_components <= min(n - 1, d):
        raise TooManyComponents(
            f"n_components={n_components} not in [1, min(rows-1, cols)="
            f"{min(n - 1, d)}]"
        )
    means = X.mean(axis=0)
    Xc = X - means
    cov = (Xc.T @ Xc) / (n - 1)
    if not np.any(cov):
        raise DegenerateData("zero covariance: all rows identical")

    eigvals, eigvecs = _jacobi_eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order][:n_components]
    components = eigvecs[:, order][:, :n_components].T.copy()

    for i in range(n_components):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            components[i] = -components[i]

    return PcaModel(
        means=means, components=components, explained_variance=eigvals
    )


def transform(m: PcaModel, X: np.ndarray) -> np.ndarray:
    """Project rows of X onto the component basis: (X - means) @ C.T."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != m.n_inputs:
        raise ShapeMismatch(
            f"expected {m.n_inputs} columns, got {X.shape[1] if X.ndim == 2 else X.shape}"
        )
    return (X - m.means) @ m.components.T


def inverse_transform(m: PcaModel, Z: np.ndarray) -> np.ndarray:
    """Map component scores back to input space: Z @ C + means."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != m.n_components:
        raise ShapeMismatch(
            f"expected {m.n_components} columns, got {Z.shape[1] if Z.ndim == 2 else Z.shape}"
        )
    return Z @ m.components + m.means
