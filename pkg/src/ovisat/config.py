"""Run configuration: one TOML file drives every command.

Paths inside the file are resolved relative to the file itself, so a
config can travel with its data directory. CLI flags --seed and --out
override the file's values without editing it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .dataset import Zone
from .errors import ConfigError
from .features import FeatureSpec
from .weeks import WeekGrid

DEFAULT_MODELS = ("linear", "ridge", "svr", "mlp", "knn", "dtr")


@dataclass(frozen=True)
class SeriesInput:
    name: str
    zone: Zone
    path: str


@dataclass(frozen=True)
class PipelineConfig:
    series: tuple[SeriesInput, ...]
    ovitraps_path: str
    grid: WeekGrid
    out_dir: str
    alpha: float = 0.05
    max_features: int = 5
    lags: tuple[int, ...] = (0, 1, 2, 3)
    specs: tuple[FeatureSpec, ...] | None = None
    model_names: tuple[str, ...] = DEFAULT_MODELS
    model_options: dict = field(default_factory=dict)
    train_fraction: float = 0.8
    cv_folds: int = 5
    seed: int = 0
    bins: int = 10

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("split.train_fraction must be in (0, 1)")
        if self.cv_folds < 2:
            raise ConfigError("split.cv_folds must be >= 2")
        if not self.series:
            raise ConfigError("inputs.series must list at least one series")
        paths = [s.path for s in self.series] + [self.ovitraps_path]
        if len(set(paths)) != len(paths):
            raise ConfigError("input paths must be distinct")


def _get(table: dict, key: str, types, default=..., where: str = ""):
    label = f"{where}.{key}" if where else key
    if key not in table:
        if default is ...:
            raise ConfigError(f"missing config key {label!r}")
        return default
    value = table[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise ConfigError(f"config key {label!r} has the wrong type")
    return value


def load_config(path, seed=None, out_dir=None) -> PipelineConfig:
    """Parse and validate a TOML run config; flags override file values."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    inputs = _get(doc, "inputs", dict)
    raw_series = _get(inputs, "series", list, where="inputs")
    series = []
    for i, entry in enumerate(raw_series):
        if not isinstance(entry, dict):
            raise ConfigError(f"inputs.series[{i}] must be a table")
        where = f"inputs.series[{i}]"
        name = _get(entry, "name", str, where=where)
        zone_s = _get(entry, "zone", str, default="none", where=where)
        try:
            zone = Zone(zone_s)
        except ValueError:
            raise ConfigError(
                f"{where}.zone must be urban/rural/none, got {zone_s!r}"
            ) from None
        series.append(
            SeriesInput(name, zone, resolve(_get(entry, "path", str, where=where)))
        )
    ovitraps = resolve(_get(inputs, "ovitraps", str, where="inputs"))

    grid_t = _get(doc, "grid", dict)
    grid = WeekGrid.from_label(
        _get(grid_t, "start", str, where="grid"),
        _get(grid_t, "weeks", int, where="grid"),
    )

    feats = _get(doc, "features", dict, default={})
    alpha = float(_get(feats, "alpha", (int, float), default=0.05, where="features"))
    max_features = _get(feats, "max_features", int, default=5, where="features")
    lags = tuple(_get(feats, "lags", list, default=[0, 1, 2, 3], where="features"))
    if not all(isinstance(l, int) and 0 <= l <= 3 for l in lags):
        raise ConfigError("features.lags must be integers in 0..3")
    specs_raw = _get(feats, "specs", list, default=None, where="features")
    specs = None
    if specs_raw is not None:
        try:
            specs = tuple(FeatureSpec.parse(s) for s in specs_raw)
        except Exception as exc:
            raise ConfigError(f"features.specs: {exc}") from exc

    split = _get(doc, "split", dict, default={})
    train_fraction = float(
        _get(split, "train_fraction", (int, float), default=0.8, where="split")
    )
    cv_folds = _get(split, "cv_folds", int, default=5, where="split")

    models_t = _get(doc, "models", dict, default={})
    names = tuple(
        _get(models_t, "include", list, default=list(DEFAULT_MODELS), where="models")
    )
    if len(set(names)) != len(names):
        raise ConfigError("models.include contains duplicates")
    options = {}
    for name in names:
        sub = models_t.get(name, {})
        if not isinstance(sub, dict):
            raise ConfigError(f"models.{name} must be a table")
        options[name] = dict(sub)

    output = _get(doc, "output", dict, default={})
    cfg_out = _get(output, "dir", str, default="out", where="output")
    cfg_seed = _get(output, "seed", int, default=0, where="output")
    bins = _get(output, "bins", int, default=10, where="output")

    return PipelineConfig(
        series=tuple(series),
        ovitraps_path=ovitraps,
        grid=grid,
        out_dir=resolve(out_dir if out_dir is not None else cfg_out),
        alpha=alpha,
        max_features=max_features,
        lags=lags,
        specs=specs,
        model_names=names,
        model_options=options,
        train_fraction=train_fraction,
        cv_folds=cv_folds,
        seed=seed if seed is not None else cfg_seed,
        bins=bins,
    )
