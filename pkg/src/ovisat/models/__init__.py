"""Six regressors behind one fit/predict contract."""

from __future__ import annotations

from ..errors import ConfigError
from .base import TrainedModel, predict
from .config import (
    CONFIG_KINDS,
    DEFAULT_RIDGE_GRID,
    DtrConfig,
    KnnConfig,
    LinearConfig,
    MlpConfig,
    ModelConfig,
    RidgeConfig,
    SvrConfig,
    config_from_dict,
)
from .linear import LinearModel, fit_ols, fit_ridge, ridge_solve, solve_spd
from .mlp import MlpModel, fit_mlp, init_params, loss_and_gradients
from .neighbors import KnnModel, chebyshev_distance, fit_knn
from .serialize import load_model, save_model
from .svr import SvrModel, fit_svr, rbf_kernel, svr_dual_objective
from .tree import DtrModel, fit_dtr

__all__ = [
    "CONFIG_KINDS",
    "DEFAULT_RIDGE_GRID",
    "DtrConfig",
    "DtrModel",
    "KnnConfig",
    "KnnModel",
    "LinearConfig",
    "LinearModel",
    "MlpConfig",
    "MlpModel",
    "ModelConfig",
    "RidgeConfig",
    "SvrConfig",
    "SvrModel",
    "TrainedModel",
    "chebyshev_distance",
    "config_from_dict",
    "fit",
    "fit_dtr",
    "fit_knn",
    "fit_mlp",
    "fit_ols",
    "fit_ridge",
    "fit_svr",
    "init_params",
    "load_model",
    "loss_and_gradients",
    "predict",
    "rbf_kernel",
    "ridge_solve",
    "save_model",
    "solve_spd",
    "svr_dual_objective",
]


def fit(config: ModelConfig, X, y, feature_names=None) -> TrainedModel:
    """Dispatch to the fitter matching the config type."""
    if isinstance(config, LinearConfig):
        return fit_ols(X, y, feature_names=feature_names)
    if isinstance(config, RidgeConfig):
        return fit_ridge(X, y, config, feature_names=feature_names)
    if isinstance(config, SvrConfig):
        return fit_svr(X, y, config, feature_names=feature_names)
    if isinstance(config, MlpConfig):
        return fit_mlp(X, y, config, feature_names=feature_names)
    if isinstance(config, KnnConfig):
        return fit_knn(X, y, config, feature_names=feature_names)
    if isinstance(config, DtrConfig):
        return fit_dtr(X, y, config, feature_names=feature_names)
    raise ConfigError(f"unknown model config {type(config).__name__}")
