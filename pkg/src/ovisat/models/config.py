"""Configuration records for the six regressors.

Numeric defaults for SVR, MLP, KNN and DTR are the tuned values the
pipeline standardizes on; everything is overridable per model from the
run config.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigError

DEFAULT_RIDGE_GRID = tuple(10.0 ** k for k in range(-4, 3))


@dataclass(frozen=True)
class LinearConfig:
    kind = "linear"


@dataclass(frozen=True)
class RidgeConfig:
    kind = "ridge"
    lambda_grid: tuple[float, ...] = DEFAULT_RIDGE_GRID
    cv_folds: int = 5

    def __post_init__(self):
        if not self.lambda_grid:
            raise ConfigError("ridge lambda grid must be non-empty")
        if any(l < 0 for l in self.lambda_grid):
            raise ConfigError("ridge lambdas must be >= 0")
        object.__setattr__(self, "lambda_grid", tuple(sorted(self.lambda_grid)))


@dataclass(frozen=True)
class SvrConfig:
    kind = "svr"
    c: float = 0.887453
    gamma: float = 0.015561
    epsilon: float = 0.1
    tol: float = 1e-6
    max_passes: int = 10000

    def __post_init__(self):
        for name in ("c", "gamma", "epsilon", "tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"svr {name} must be > 0")
        if self.max_passes < 1:
            raise ConfigError("svr max_passes must be >= 1")


@dataclass(frozen=True)
class MlpConfig:
    kind = "mlp"
    hidden: tuple[int, ...] = (3, 3, 3)
    alpha: float = 0.070921
    learning_rate: float = 1e-2
    epochs: int = 5000
    seed: int = 0

    def __post_init__(self):
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ConfigError("mlp hidden layer sizes must be positive")
        if self.alpha < 0 or self.learning_rate <= 0:
            raise ConfigError("mlp alpha must be >= 0 and learning_rate > 0")
        if self.epochs < 1:
            raise ConfigError("mlp epochs must be >= 1")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))


@dataclass(frozen=True)
class KnnConfig:
    kind = "knn"
    k: int = 4
    pca_components: int = 5

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("knn k must be >= 1")
        if self.pca_components < 1:
            raise ConfigError("knn pca_components must be >= 1")


@dataclass(frozen=True)
class DtrConfig:
    kind = "dtr"
    max_depth: int = 3
    min_samples_split: int = 5
    pca_components: int = 2

    def __post_init__(self):
        if self.max_depth < 1:
            raise ConfigError("dtr max_depth must be >= 1")
        if self.min_samples_split < 2:
            raise ConfigError("dtr min_samples_split must be >= 2")
        if self.pca_components < 1:
            raise ConfigError("dtr pca_components must be >= 1")


ModelConfig = (
    LinearConfig | RidgeConfig | SvrConfig | MlpConfig | KnnConfig | DtrConfig
)

CONFIG_KINDS: dict[str, type] = {
    cls.kind: cls
    for cls in (LinearConfig, RidgeConfig, SvrConfig, MlpConfig, KnnConfig, DtrConfig)
}


def config_from_dict(kind: str, options: dict | None = None) -> ModelConfig:
    """Build a config from its name plus keyword overrides."""
    cls = CONFIG_KINDS.get(kind)
    if cls is None:
        raise ConfigError(
            f"unknown model {kind!r}; expected one of {sorted(CONFIG_KINDS)}"
        )
    options = dict(options or {})
    for key in ("hidden", "lambda_grid"):
        if key in options and isinstance(options[key], list):
            options[key] = tuple(options[key])
    try:
        return cls(**options)
    except TypeError as exc:
        raise ConfigError(f"bad option for model {kind!r}: {exc}") from exc
