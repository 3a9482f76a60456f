"""CART-style regression tree on PCA scores.

Inputs are first reduced to the leading principal components (two by
default). Splits minimize the summed squared error of the two children;
candidate thresholds are the midpoints between consecutive sorted
unique feature values. Equal-SSE ties go to the lowest feature index,
then the lowest threshold. Leaves predict the mean target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import pca
from ..errors import DegenerateData
from .base import TrainedModel, as_matrix, as_vector, default_feature_names
from .config import DtrConfig


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature/threshold/children set) or leaf (value set)."""

    value: float | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.value is not None


def _sse(y: np.ndarray) -> float:
    if len(y) == 0:
        return 0.0
    d = y - y.mean()
    return float(np.dot(d, d))


def _best_split(Z: np.ndarray, y: np.ndarray) -> tuple[int, float] | None:
    """Lowest-SSE (feature, threshold), or None when nothing separates."""
    best = None
    best_sse = np.inf
    for f in range(Z.shape[1]):
        u = np.unique(Z[:, f])
        for a, b in zip(u, u[1:]):
            thr = (a + b) / 2.0
            mask = Z[:, f] <= thr
            sse = _sse(y[mask]) + _sse(y[~mask])
            if sse < best_sse:  # strict: first (feature, threshold) wins ties
                best_sse = sse
                best = (f, thr)
    return best


def _leaf(y: np.ndarray) -> TreeNode:
    # the mean of a pure node is its common value; computing it would
    # only add summation roundoff
    if np.all(y == y[0]):
        return TreeNode(value=float(y[0]))
    return TreeNode(value=float(np.mean(y)))


def _grow(Z: np.ndarray, y: np.ndarray, depth: int, config: DtrConfig) -> TreeNode:
    if (
        depth >= config.max_depth
        or len(y) < config.min_samples_split
        or bool(np.all(y == y[0]))
    ):
        return _leaf(y)
    split = _best_split(Z, y)
    if split is None:
        return _leaf(y)
    f, thr = split
    mask = Z[:, f] <= thr
    return TreeNode(
        feature=f,
        threshold=thr,
        left=_grow(Z[mask], y[mask], depth + 1, config),
        right=_grow(Z[~mask], y[~mask], depth + 1, config),
    )


def _predict_node(node: TreeNode, Z: np.ndarray) -> np.ndarray:
    if node.is_leaf:
        return np.full(Z.shape[0], node.value)
    mask = Z[:, node.feature] <= node.threshold
    out = np.empty(Z.shape[0])
    out[mask] = _predict_node(node.left, Z[mask])
    out[~mask] = _predict_node(node.right, Z[~mask])
    return out


@dataclass(frozen=True)
class DtrModel(TrainedModel):
    projection: pca.PcaModel | None = None
    root: TreeNode = None

    def _predict(self, X: np.ndarray) -> np.ndarray:
        Z = pca.transform(self.projection, X) if self.projection else X
        return _predict_node(self.root, Z)


def fit_dtr(X, y, config: DtrConfig | None = None, feature_names=None) -> DtrModel:
    """Fit the projection, then grow the tree.

    Never raises on small inputs: a single row yields a lone leaf, and
    the component count is clamped to what the data can support.
    """
    config = config or DtrConfig()
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    names = tuple(feature_names or default_feature_names(X.shape[1]))
    n, d = X.shape
    n_comp = min(config.pca_components, n - 1, d)
    if n_comp < 1:
        return DtrModel(
            config=config, feature_names=names, projection=None, root=_leaf(y)
        )
    try:
        projection = pca.fit_pca(X, n_comp)
        Z = pca.transform(projection, X)
    except DegenerateData:
        projection = None
        Z = X
    root = _grow(Z, y, depth=0, config=config)
    return DtrModel(
        config=config, feature_names=names, projection=projection, root=root
    )
