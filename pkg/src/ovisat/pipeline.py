"""Pipeline commands behind the CLI: ingest, screen, train, evaluate, predict.

Every command reads and writes plain files under the config's output
directory, carries no hidden state, and is byte-deterministic for a
given config and seed, so reruns can be diffed.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os

import numpy as np

from . import models, svgplot
from .config import PipelineConfig
from .dataset import (
    WeeklySeries,
    Zone,
    aggregate_oviposition,
    interpolate_to_weekly,
    parse_ovitrap_records,
    parse_raw_series,
)
from .errors import (
    ConfigError,
    DataError,
    FeatureMismatch,
    GridMismatch,
    ModelError,
)
from .evaluation import (
    ModelMetrics,
    metrics_for_model,
    residual_stats,
    summarize,
)
from .features import FeatureMatrix, FeatureSpec, assemble_matrix, make_lags, select_features
from .splits import chronological_split
from .weeks import WeekGrid, parse_week_label

TARGET_NAME = "oviposition"

DATASET_FILE = "dataset.csv"
PROVENANCE_FILE = "dataset.provenance.json"
SCREENING_FILE = "screening.csv"
REPORT_JSON = "report.json"
REPORT_TXT = "report.txt"
SUMMARY_FILE = "summary.csv"
PREDICTIONS_FILE = "predictions.csv"


def _out(cfg: PipelineConfig, name: str) -> str:
    return os.path.join(cfg.out_dir, name)


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(path, doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


# --- ingest ----------------------------------------------------------------

def run_ingest(cfg: PipelineConfig) -> tuple[str, str]:
    """Parse raw inputs, align everything to the grid, write dataset.csv."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    library: dict[str, WeeklySeries] = {}
    hashes: dict[str, dict] = {}
    for s in cfg.series:
        raw = parse_raw_series(s.path, s.name, s.zone)
        weekly = interpolate_to_weekly(raw, cfg.grid)
        if weekly.name in library:
            raise ConfigError(f"duplicate series key {weekly.name!r}")
        library[weekly.name] = weekly
        hashes[weekly.name] = {
            "file": os.path.basename(s.path),
            "sha256": _sha256(s.path),
        }
    records = parse_ovitrap_records(cfg.ovitraps_path)
    target = aggregate_oviposition(records, cfg.grid, name=TARGET_NAME)
    hashes[TARGET_NAME] = {
        "file": os.path.basename(cfg.ovitraps_path),
        "sha256": _sha256(cfg.ovitraps_path),
    }

    keys = list(library)
    dataset_path = _out(cfg, DATASET_FILE)
    with open(dataset_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["week", *keys, TARGET_NAME])
        labels = cfg.grid.labels()
        for t in range(cfg.grid.length):
            row = [labels[t]]
            for key in keys:
                v = library[key].values[t]
                row.append("" if np.isnan(v) else repr(float(v)))
            row.append(repr(float(target.values[t])))
            w.writerow(row)

    prov_path = _out(cfg, PROVENANCE_FILE)
    _write_json(prov_path, {
        "format": "ovisat-dataset",
        "version": 1,
        "grid": {"start": cfg.grid.labels()[0], "weeks": cfg.grid.length},
        "interpolation": "linear at ISO-week Thursday midpoints",
        "inputs": hashes,
        "series": keys,
        "target": TARGET_NAME,
    })
    return dataset_path, prov_path


def read_dataset(cfg: PipelineConfig) -> tuple[dict[str, WeeklySeries], WeeklySeries]:
    """Load dataset.csv back into a series library plus the target."""
    path = _out(cfg, DATASET_FILE)
    if not os.path.exists(path):
        raise DataError(f"no dataset at {path}; run `ingest` first")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "week" or header[-1] != TARGET_NAME:
            raise DataError(f"{path}: unexpected dataset header")
        keys = header[1:-1]
        labels, columns = [], []
        for row in reader:
            labels.append(row[0])
            columns.append([float(v) if v else np.nan for v in row[1:]])
    data = np.array(columns, dtype=float)
    if labels != cfg.grid.labels():
        raise GridMismatch(
            f"{path} covers {labels[0]}..{labels[-1]} "
            f"but the config grid starts {cfg.grid.labels()[0]}"
        )
    library = {
        key: WeeklySeries(name=key, grid=cfg.grid, values=data[:, i])
        for i, key in enumerate(keys)
    }
    target = WeeklySeries(name=TARGET_NAME, grid=cfg.grid, values=data[:, -1])
    return library, target


# --- screening ---------------------------------------------------------------

def _spec_for_key(key: str, lag: int) -> FeatureSpec:
    name, _, zone = key.partition(":")
    return FeatureSpec(name, Zone(zone or "none"), lag)


def run_screen(cfg: PipelineConfig):
    """Correlation/p-value screen of every (series, lag) candidate."""
    library, target = read_dataset(cfg)
    candidates = []
    for key, series in library.items():
        for lag in cfg.lags:
            (_, col), = make_lags(series, [lag])
            candidates.append((_spec_for_key(key, lag), col))
    result = select_features(
        candidates, target.values, alpha=cfg.alpha, max_features=cfg.max_features
    )
    path = _out(cfg, SCREENING_FILE)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["spec", "r", "p", "selected"])
        for c in result.candidates:
            w.writerow([str(c.spec), repr(c.r), repr(c.p), str(c.selected).lower()])
    return result, path


def selected_specs(cfg: PipelineConfig) -> tuple[FeatureSpec, ...]:
    """Feature set for modeling: explicit config specs, else screen output."""
    if cfg.specs is not None:
        return cfg.specs
    path = _out(cfg, SCREENING_FILE)
    if not os.path.exists(path):
        raise DataError(
            f"no screening output at {path}; run `screen` or set features.specs"
        )
    specs = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if row and row[3] == "true":
                specs.append(FeatureSpec.parse(row[0]))
    if not specs:
        raise DataError(f"{path} lists no selected features")
    return tuple(specs)


def build_matrix(cfg: PipelineConfig) -> FeatureMatrix:
    library, target = read_dataset(cfg)
    return assemble_matrix(list(selected_specs(cfg)), library, target)


# --- training ----------------------------------------------------------------

def model_configs(
    cfg: PipelineConfig, n_features: int | None = None
) -> list[tuple[str, models.ModelConfig]]:
    """Instantiate the configured models in config order.

    Defaults that depend on the data are resolved here: the MLP seed
    follows the run seed, and the KNN/DTR component counts are capped
    at the actual feature count (explicit user values are honored).
    """
    out = []
    for name in cfg.model_names:
        options = dict(cfg.model_options.get(name, {}))
        if name == "mlp":
            options.setdefault("seed", cfg.seed)
        if name == "ridge":
            options.setdefault("cv_folds", cfg.cv_folds)
        if n_features is not None and name in ("knn", "dtr"):
            default = 5 if name == "knn" else 2
            options.setdefault("pca_components", min(default, n_features))
        out.append((name, models.config_from_dict(name, options)))
    return out


def _model_metadata(cfg: PipelineConfig, fm: FeatureMatrix, n_train: int) -> dict:
    return {
        "specs": [str(s) for s in fm.specs],
        "feature_scale": {
            "means": [repr(float(v)) for v in fm.feature_means],
            "sds": [repr(float(v)) for v in fm.feature_sds],
        },
        "target_scale": {
            "mean": repr(float(fm.target_mean)),
            "sd": repr(float(fm.target_sd)),
        },
        "grid": {"start": cfg.grid.labels()[0], "weeks": cfg.grid.length},
        "train_rows": n_train,
        "train_fraction": cfg.train_fraction,
    }


def run_train(cfg: PipelineConfig):
    """Fit every configured model on the chronological head.

    A model that fails to fit is reported and skipped; the survivors are
    still written so one bad configuration cannot sink the whole run.
    """
    fm = build_matrix(cfg)
    plan = chronological_split(fm.n_rows, cfg.train_fraction)
    meta = _model_metadata(cfg, fm, len(plan.train_idx))
    written: list[tuple[str, str]] = []
    failures: list[tuple[str, Exception]] = []
    for name, config in model_configs(cfg):
        try:
            model = models.fit(
                config, fm.X[plan.train], fm.y[plan.train], fm.feature_names
            )
        except (ModelError, DataError) as exc:
            failures.append((name, exc))
            continue
        path = _out(cfg, f"model_{name}.json")
        models.save_model(model, path, metadata=meta)
        written.append((name, path))
    return written, failures


# --- evaluation ----------------------------------------------------------------

def _metrics_row(name: str, metrics: ModelMetrics) -> dict:
    return {
        "name": name,
        "corr_full": metrics.corr_full,
        "mse_full": metrics.mse_full,
        "mean_score": metrics.cv.mean_score,
        "sd_score": metrics.cv.sd_score,
        "corr_holdout": metrics.corr_holdout,
        "mse_holdout": metrics.mse_holdout,
        "fold_scores": list(metrics.cv.fold_scores),
    }


def format_report_table(rows: list[dict]) -> str:
    headers = ["Model", "Corr11", "MSE", "Mean Score", "SD of Score",
               "CorrL20", "MSEL20"]
    table = [headers]
    for row in rows:
        table.append([
            row["name"],
            f"{row['corr_full']:.3f}",
            f"{row['mse_full']:.3f}",
            f"{row['mean_score']:.3f}",
            f"{row['sd_score']:.3f}",
            f"{row['corr_holdout']:.3f}",
            f"{row['mse_holdout']:.3f}",
        ])
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for r in table:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def run_evaluate(cfg: PipelineConfig):
    """Score every trained model and emit the report, tables, and plots."""
    fm = build_matrix(cfg)
    plan = chronological_split(fm.n_rows, cfg.train_fraction)

    rows: list[dict] = []
    predictions: dict[str, np.ndarray] = {}
    for name, _ in model_configs(cfg):
        model, meta = models.load_model(_out(cfg, f"model_{name}.json"))
        if list(model.feature_names) != list(fm.feature_names):
            raise FeatureMismatch(
                f"model {name} was trained on {list(model.feature_names)}, "
                f"dataset provides {list(fm.feature_names)}"
            )
        metrics = metrics_for_model(model, fm, plan, k=cfg.cv_folds)
        rows.append(_metrics_row(name, metrics))
        predictions[name] = models.predict(model, fm.X)

    report = {
        "format": "ovisat-report",
        "version": 1,
        "specs": [str(s) for s in fm.specs],
        "rows": fm.n_rows,
        "train_rows": len(plan.train_idx),
        "test_rows": len(plan.test_idx),
        "cv_folds": cfg.cv_folds,
        "seed": cfg.seed,
        "models": rows,
    }
    _write_json(_out(cfg, REPORT_JSON), report)
    with open(_out(cfg, REPORT_TXT), "w") as fh:
        fh.write(format_report_table(rows))

    with open(_out(cfg, SUMMARY_FILE), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["series", "min", "q1", "median", "mean", "q3", "max"])
        for label, values in [("observed", fm.y)] + [
            (name, predictions[name]) for name, _ in model_configs(cfg)
        ]:
            w.writerow([label, *(repr(v) for v in summarize(values).as_tuple())])

    shade = (plan.test_idx[0], plan.test_idx[-1])
    for name, _ in model_configs(cfg):
        svgplot.line_plot(
            _out(cfg, f"fit_{name}.svg"),
            f"Observed vs {name} (shaded: holdout)",
            [("observed", fm.y), (name, predictions[name])],
            shade=shade,
        )
    svgplot.scatter_plot(
        _out(cfg, "scatter.svg"),
        "Observed vs predicted",
        [(name, fm.y, predictions[name]) for name, _ in model_configs(cfg)],
    )
    hist_groups, box_items = [], []
    for name, _ in model_configs(cfg):
        stats = residual_stats(fm.y, predictions[name], bins=cfg.bins)
        hist_groups.append((name, stats.bin_edges, stats.counts))
        box_items.append((name, stats.five_number))
    svgplot.histogram_plot(_out(cfg, "residual_hist.svg"), "Residuals", hist_groups)
    svgplot.box_plot(_out(cfg, "residual_box.svg"), "Residuals", box_items)
    return report


# --- prediction ----------------------------------------------------------------

def run_predict(cfg: PipelineConfig, model_path, weeks: str | None = None) -> str:
    """Apply a saved model to the ingested dataset; write predictions.csv.

    `weeks` optionally restricts output to an inclusive 'START:END'
    label range. Features are standardized with the scaling captured at
    training time, and predictions are back-transformed to egg counts
    when the target scaling is available.
    """
    model, meta = models.load_model(model_path)
    library, _ = read_dataset(cfg)
    spec_strings = meta.get("specs")
    if not spec_strings:
        raise FeatureMismatch(f"{model_path} carries no feature specs")
    specs = [FeatureSpec.parse(s) for s in spec_strings]
    missing = [s.series_key for s in specs if s.series_key not in library]
    extra = sorted(set(library) - {s.series_key for s in specs})
    if missing:
        raise FeatureMismatch(
            f"dataset lacks series {missing}; unused series present: {extra}"
        )
    scale = meta.get("feature_scale") or {}
    try:
        means = np.array([float(v) for v in scale["means"]])
        sds = np.array([float(v) for v in scale["sds"]])
    except (KeyError, TypeError, ValueError):
        raise FeatureMismatch(f"{model_path} carries no usable feature scaling")

    columns = []
    for spec in specs:
        (_, col), = make_lags(library[spec.series_key], [spec.lag_weeks])
        columns.append(col)
    X_raw = np.column_stack(columns)
    keep = ~np.isnan(X_raw).any(axis=1)
    labels = [lab for lab, k in zip(cfg.grid.labels(), keep) if k]
    Xz = (X_raw[keep] - means) / sds

    if weeks is not None:
        try:
            start_s, _, end_s = weeks.partition(":")
            lo = parse_week_label(start_s)
            hi = parse_week_label(end_s) if end_s else lo
        except DataError as exc:
            raise ConfigError(f"bad --weeks range {weeks!r}: {exc}") from exc
        chosen = [
            i for i, lab in enumerate(labels)
            if lo <= parse_week_label(lab) <= hi
        ]
        labels = [labels[i] for i in chosen]
        Xz = Xz[chosen]

    pred = models.predict(model, Xz)
    target_scale = meta.get("target_scale") or {}
    back = None
    if "mean" in target_scale and "sd" in target_scale:
        back = pred * float(target_scale["sd"]) + float(target_scale["mean"])

    path = _out(cfg, PREDICTIONS_FILE)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["week", "predicted_z"]
        if back is not None:
            header.append("predicted_eggs")
        w.writerow(header)
        for i, lab in enumerate(labels):
            row = [lab, repr(float(pred[i]))]
            if back is not None:
                row.append(repr(float(back[i])))
            w.writerow(row)
    return path
