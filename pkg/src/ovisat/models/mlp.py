"""Small ReLU multilayer perceptron trained by full-batch gradient descent.

Three hidden layers of three units is the default architecture. The
loss is mean squared error plus alpha times the sum of squared weights
(biases unpenalized). Full-batch descent with a fixed step keeps the
whole fit deterministic for a given seed; stochastic minibatching buys
nothing at a couple hundred rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergedLoss, TooFewSamples
from .base import TrainedModel, as_matrix, as_vector, default_feature_names
from .config import MlpConfig


@dataclass(frozen=True)
class MlpModel(TrainedModel):
    weights: tuple[np.ndarray, ...] = field(repr=False, default=())
    biases: tuple[np.ndarray, ...] = field(repr=False, default=())
    final_loss: float = np.nan

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return forward(self.weights, self.biases, X)


def init_params(
    n_inputs: int, hidden: tuple[int, ...], seed: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Glorot-uniform weights, zero biases, drawn layer by layer."""
    rng = np.random.default_rng(seed)
    sizes = [n_inputs, *hidden, 1]
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward(weights, biases, X: np.ndarray) -> np.ndarray:
    h = X
    for W, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
    return (h @ weights[-1] + biases[-1]).ravel()


def loss_and_gradients(weights, biases, X, y, alpha: float):
    """Loss plus exact gradients for every weight matrix and bias vector.

    loss = mean((yhat - y)^2) + alpha * sum of squared weights.
    """
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    n = X.shape[0]

    with np.errstate(over="ignore", invalid="ignore"):
        return _loss_and_gradients(weights, biases, X, y, alpha, n)


def _loss_and_gradients(weights, biases, X, y, alpha, n):
    # overflow here is legal: a diverging fit is caught by the caller
    # through the non-finite loss value
    activations = [X]
    pre: list[np.ndarray] = []
    h = X
    for W, b in zip(weights[:-1], biases[:-1]):
        z = h @ W + b
        pre.append(z)
        h = np.maximum(z, 0.0)
        activations.append(h)
    yhat = (h @ weights[-1] + biases[-1]).ravel()

    resid = yhat - y
    loss = float(np.mean(resid ** 2)) + alpha * sum(
        float(np.sum(W * W)) for W in weights
    )

    grad_w = [None] * len(weights)
    grad_b = [None] * len(biases)
    delta = (2.0 / n) * resid[:, None]
    grad_w[-1] = activations[-1].T @ delta + 2.0 * alpha * weights[-1]
    grad_b[-1] = delta.sum(axis=0)
    for l in range(len(weights) - 2, -1, -1):
        delta = (delta @ weights[l + 1].T) * (pre[l] > 0.0)
        grad_w[l] = activations[l].T @ delta + 2.0 * alpha * weights[l]
        grad_b[l] = delta.sum(axis=0)
    return loss, grad_w, grad_b


def fit_mlp(X, y, config: MlpConfig | None = None, feature_names=None) -> MlpModel:
    """Gradient-descent training for a fixed number of epochs."""
    config = config or MlpConfig()
    X = as_matrix(X)
    y = as_vector(y, n=X.shape[0])
    if X.shape[0] < 2:
        raise TooFewSamples("need at least 2 training rows")

    weights, biases = init_params(X.shape[1], config.hidden, config.seed)
    lr = config.learning_rate
    loss = np.nan
    for epoch in range(config.epochs):
        loss, grad_w, grad_b = loss_and_gradients(
            weights, biases, X, y, config.alpha
        )
        if not np.isfinite(loss):
            raise DivergedLoss(f"non-finite loss at epoch {epoch}")
        for l in range(len(weights)):
            weights[l] = weights[l] - lr * grad_w[l]
            biases[l] = biases[l] - lr * grad_b[l]
    final_loss, _, _ = loss_and_gradients(weights, biases, X, y, config.alpha)
    if not np.isfinite(final_loss):
        raise DivergedLoss("non-finite loss after the final update")

    return MlpModel(
        config=config,
        feature_names=tuple(feature_names or default_feature_names(X.shape[1])),
        weights=tuple(weights),
        biases=tuple(biases),
        final_loss=float(final_loss),
    )
