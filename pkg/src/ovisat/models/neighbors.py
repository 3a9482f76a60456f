"""k-nearest-neighbor regression in PCA space.

Inputs are projected onto the leading principal components (five by
default) and neighbors are found by exhaustive scan under the Chebyshev
metric. Prediction is the uniform mean of the neighbor targets; any
point tied with the k-th distance joins the neighborhood, so the answer
never depends on how the scan orders equal distances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import pca
from ..errors import LengthMismatch, TooFewSamples
from .base import TrainedModel, as_matrix, as_vector, default_feature_names
from .config import KnnConfig


def chebyshev_distance(a, b) -> float:
    """max_i |a_i - b_i|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.max(np.abs(a - b)))


@dataclass(frozen=True)
class KnnModel(TrainedModel):
    projection: pca.PcaModel = None
    train_z: np.ndarray = field(repr=False, default=None)
    train_y: np.ndarray = field(repr=False, default=None)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        Z = pca.transform(self.projection, X)
        k = self.config.k
        out = np.empty(Z.shape[0])
        for i, z in enumerate(Z):
            d = np.max(np.abs(self.train_z - z), axis=1)
            kth = np.partition(d, k - 1)[k - 1]
            out[i] = np.mean(self.train_y[d <= kth])
        return out


def fit_knn(X, y, config: KnnConfig | None = None, feature_names=None) -> KnnModel:
    """Store the PCA projection of the training set; no optimization."""
    config = config or KnnConfig()
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    if X.shape[0] < config.k:
        raise TooFewSamples(f"need rows >= k={config.k}, got {X.shape[0]}")
    projection = pca.fit_pca(X, config.pca_components)
    return KnnModel(
        config=config,
        feature_names=tuple(feature_names or default_feature_names(X.shape[1])),
        projection=projection,
        train_z=pca.transform(projection, X),
        train_y=y.copy(),
    )
