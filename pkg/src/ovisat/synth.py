"""Seeded synthetic inputs for demos and end-to-end testing.

Drivers are unit-variance AR(1) series; the weekly egg total is an
affine rescaling of a response built from lagged drivers plus Gaussian
noise. The `threshold` response mixes ramp terms that only activate
above a level with a driver interaction, which linear fits cannot
capture; the `linear` response is a plain weighted sum. Outputs land in
the same CSV formats the ingestion step reads, so a generated directory
is a complete, reproducible pipeline input.
"""

from __future__ import annotations

import csv
import datetime as dt
import os
from dataclasses import dataclass

import numpy as np

from .dataset import Zone
from .errors import ConfigError
from .weeks import WeekGrid

WARMUP = 3  # pre-grid steps so every lagged term is defined on the grid

# per-driver weekly lags and response weights (cycled when drivers > 5)
_LAGS = (1, 2, 3, 1, 3)
_WEIGHTS = (1.0, 0.9, 0.8, 1.0, 0.7)

EGG_BASE = 150.0
EGG_SCALE = 55.0
HOUSES_OUTSIDE = 4
INSIDE_EGGS = 7  # constant inside-trap noise, ignored by aggregation


@dataclass(frozen=True)
class SyntheticSpec:
    weeks: int = 209
    drivers: int = 5
    autocorrelation: float = 0.7
    response: str = "threshold"  # "linear" | "threshold"
    noise_sd: float = 0.3
    seed: int = 0
    start: str = "2012-W31"

    def __post_init__(self):
        if self.weeks <= 10:
            raise ConfigError("weeks must be > 10")
        if self.drivers < 1:
            raise ConfigError("need at least one driver")
        if not 0.0 <= self.autocorrelation < 1.0:
            raise ConfigError("autocorrelation must be in [0, 1)")
        if self.noise_sd < 0:
            raise ConfigError("noise sd must be >= 0")
        if self.response not in ("linear", "threshold"):
            raise ConfigError(f"unknown response {self.response!r}")


@dataclass(frozen=True)
class SyntheticData:
    spec: SyntheticSpec
    grid: WeekGrid
    driver_names: tuple[str, ...]
    driver_zones: tuple[Zone, ...]
    drivers: np.ndarray      # (weeks, n_drivers), on-grid values
    response: np.ndarray     # (weeks,) noisy response
    egg_totals: np.ndarray   # (weeks,) non-negative ints

    @property
    def planted_specs(self) -> tuple[str, ...]:
        """Ground-truth feature specs the response was built from."""
        out = []
        for i, (name, zone) in enumerate(zip(self.driver_names, self.driver_zones)):
            lag = _LAGS[i % len(_LAGS)]
            out.append(f"{name}:{zone.value}:lag{lag}")
        return tuple(out)


def _driver_name(i: int, n: int) -> tuple[str, Zone]:
    # last driver doubles as the zone-less rain series
    if i == n - 1 and n > 1:
        return "rain", Zone.NONE
    return f"env{i + 1}", Zone.RURAL


def generate(spec: SyntheticSpec) -> SyntheticData:
    rng = np.random.default_rng(spec.seed)
    grid = WeekGrid.from_label(spec.start, spec.weeks)
    n, d = spec.weeks, spec.drivers
    phi = spec.autocorrelation

    total = n + WARMUP
    innov_sd = np.sqrt(1.0 - phi * phi)
    drv = np.empty((total, d))
    drv[0] = rng.normal(0.0, 1.0, d)
    for t in range(1, total):
        drv[t] = phi * drv[t - 1] + innov_sd * rng.normal(0.0, 1.0, d)

    lags = np.array([_LAGS[i % len(_LAGS)] for i in range(d)])
    weights = np.array([_WEIGHTS[i % len(_WEIGHTS)] for i in range(d)])
    # lagged view aligned to grid week t (row WARMUP + t in drv)
    lagged = np.column_stack(
        [drv[WARMUP - lags[i] : WARMUP - lags[i] + n, i] for i in range(d)]
    )

    if spec.response == "linear":
        resp = lagged @ weights
    else:
        # ramps that wake up above a level, plus an interaction term
        resp = (weights * np.maximum(0.0, lagged - 0.2) * 2.0).sum(axis=1)
        resp += 1.2 * lagged[:, 0] * lagged[:, min(1, d - 1)]
    resp = resp + rng.normal(0.0, spec.noise_sd, n)

    eggs = np.maximum(0.0, np.rint(EGG_BASE + EGG_SCALE * resp)).astype(int)

    names, zones = zip(*(_driver_name(i, d) for i in range(d)))
    return SyntheticData(
        spec=spec,
        grid=grid,
        driver_names=tuple(names),
        driver_zones=tuple(zones),
        drivers=drv[WARMUP:],
        response=resp,
        egg_totals=eggs,
    )


def write_inputs(data: SyntheticData, out_dir) -> dict[str, str]:
    """Write driver CSVs and the ovitrap CSV; returns name -> path."""
    os.makedirs(out_dir, exist_ok=True)
    paths: dict[str, str] = {}
    midpoints = data.grid.midpoints()

    for i, name in enumerate(data.driver_names):
        path = os.path.join(out_dir, f"{name}.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["date", "value"])
            for day, value in zip(midpoints, data.drivers[:, i]):
                w.writerow([day.isoformat(), repr(float(value))])
        paths[name] = path

    path = os.path.join(out_dir, "ovitraps.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["house_id", "placement", "iso_year", "iso_week", "egg_count"])
        for t, total in enumerate(data.egg_totals):
            year, week = data.grid.week_of(t)
            share, rem = divmod(int(total), HOUSES_OUTSIDE)
            for h in range(HOUSES_OUTSIDE):
                eggs = share + (1 if h < rem else 0)
                w.writerow([f"h{h + 1}", "outside", year, week, eggs])
            w.writerow([f"h{HOUSES_OUTSIDE + 1}", "inside", year, week, INSIDE_EGGS])
    paths["ovitraps"] = path
    return paths


def write_config(data: SyntheticData, out_dir, results_dir: str = "results") -> str:
    """Emit a ready-to-run pipeline config next to the generated inputs."""
    lines = [
        "[inputs]",
        'ovitraps = "ovitraps.csv"',
    ]
    for name, zone in zip(data.driver_names, data.driver_zones):
        lines += [
            "",
            "[[inputs.series]]",
            f'name = "{name}"',
            f'zone = "{zone.value}"',
            f'path = "{name}.csv"',
        ]
    lines += [
        "",
        "[grid]",
        f'start = "{data.spec.start}"',
        f"weeks = {data.spec.weeks}",
        "",
        "[features]",
        "alpha = 0.05",
        "max_features = 5",
        "lags = [0, 1, 2, 3]",
        "",
        "[split]",
        "train_fraction = 0.8",
        "cv_folds = 5",
        "",
        "[models]",
        'include = ["linear", "ridge", "svr", "mlp", "knn", "dtr"]',
        "",
        "[models.svr]",
        "# defaults are tuned for the field data scale; the synthetic scale",
        "# heuristic is gamma = 1 / (n_features * var) with var = 1 after z-scoring",
        "gamma = 0.2",
        "c = 1.0",
        "",
        "[output]",
        'dir = "{}"'.format(results_dir),
        f"seed = {data.spec.seed}",
        "",
    ]
    path = os.path.join(out_dir, "config.toml")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
    return path
