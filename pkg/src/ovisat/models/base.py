"""Uniform fit/predict surface shared by the six regressors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch
from .config import ModelConfig


@dataclass(frozen=True)
class TrainedModel:
    """Base record for a fitted regressor.

    Subclasses add their parameters and implement `_predict` on an
    already shape-checked float matrix. Instances are immutable, so a
    fitted model is safe to share across threads.
    """

    config: ModelConfig
    feature_names: tuple[str, ...]

    def _predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict(self, X)


def as_matrix(X, n_cols: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {X.shape}")
    if n_cols is not None and X.shape[1] != n_cols:
        raise ShapeMismatch(f"expected {n_cols} columns, got {X.shape[1]}")
    return X


def as_vector(y, n: int | None = None) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ShapeMismatch(f"expected a 1-D vector, got shape {y.shape}")
    if n is not None and len(y) != n:
        raise ShapeMismatch(f"expected length {n}, got {len(y)}")
    return y


def predict(m: TrainedModel, X) -> np.ndarray:
    """Apply a trained model to new rows; empty input gives an empty vector."""
    X = as_matrix(X, n_cols=len(m.feature_names))
    if X.shape[0] == 0:
        return np.empty(0)
    return m._predict(X)


def default_feature_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))
