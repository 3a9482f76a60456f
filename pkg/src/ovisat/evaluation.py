"""Holdout evaluation, walk-forward cross-validation, quality metrics.

A model's report row carries the correlation and MSE over the complete
series (the model only ever saw the first 80%), the same two measures
over the held-out tail, and the mean/sd of the per-fold validation MSE
("score") from walk-forward cross-validation on the training block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import models
from .errors import (
    ConstantInput,
    EmptyInput,
    LengthMismatch,
    ModelError,
    TooFewSamples,
)
from .features import FeatureMatrix, pearson_with_pvalue
from .models import ModelConfig
from .splits import SplitPlan, chronological_split, time_series_splits

__all__ = [
    "SplitPlan",
    "chronological_split",
    "time_series_splits",
    "CvReport",
    "ModelMetrics",
    "SummaryRow",
    "ResidualStats",
    "mse",
    "cross_validate",
    "evaluate_holdout",
    "summarize",
    "residual_stats",
]

DEFAULT_CV_FOLDS = 5


@dataclass(frozen=True)
class CvReport:
    fold_scores: tuple[float, ...]
    mean_score: float
    sd_score: float


@dataclass(frozen=True)
class ModelMetrics:
    corr_full: float      # Pearson r, observed vs fitted, whole series
    mse_full: float
    corr_holdout: float   # same, holdout block only
    mse_holdout: float
    cv: CvReport


@dataclass(frozen=True)
class SummaryRow:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.min, self.q1, self.median, self.mean, self.q3, self.max)


@dataclass(frozen=True)
class ResidualStats:
    residuals: np.ndarray = field(repr=False)
    bin_edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    five_number: SummaryRow = None


def mse(observed, predicted) -> float:
    observed = np.asarray(observed, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if observed.shape != predicted.shape or observed.ndim != 1:
        raise LengthMismatch(
            f"shapes {observed.shape} and {predicted.shape} differ"
        )
    if len(observed) == 0:
        raise EmptyInput("mse of empty vectors")
    d = observed - predicted
    return float(np.mean(d * d))


def _quantile(sorted_values: np.ndarray, q: float) -> float:
    """Linear interpolation between order statistics at position q*(n-1)."""
    pos = q * (len(sorted_values) - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    if lo == hi:
        return float(sorted_values[lo])
    frac = pos - lo
    return float(sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac)


def summarize(values) -> SummaryRow:
    """Six-number summary: min, q1, median, mean, q3, max."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) == 0:
        raise EmptyInput("cannot summarize an empty vector")
    s = np.sort(values)
    return SummaryRow(
        min=float(s[0]),
        q1=_quantile(s, 0.25),
        median=_quantile(s, 0.5),
        mean=float(np.mean(values)),
        q3=_quantile(s, 0.75),
        max=float(s[-1]),
    )


def residual_stats(observed, predicted, bins: int = 10) -> ResidualStats:
    """Residual histogram and five-number summary.

    Bins are equal-width over [min, max], left-closed except the last,
    which also takes the right edge. A zero-width range is padded by
    half a unit on each side so every residual still lands in a bin.
    """
    observed = np.asarray(observed, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if observed.shape != predicted.shape or observed.ndim != 1:
        raise LengthMismatch(
            f"shapes {observed.shape} and {predicted.shape} differ"
        )
    if bins < 1:
        raise EmptyInput("need bins >= 1")
    residuals = observed - predicted
    lo, hi = float(np.min(residuals)), float(np.max(residuals))
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    counts = np.zeros(bins, dtype=int)
    for r in residuals:
        idx = int((r - lo) / (hi - lo) * bins)
        idx = min(max(idx, 0), bins - 1)
        # guard against float rounding placing r across its edge
        while idx > 0 and r < edges[idx]:
            idx -= 1
        while idx < bins - 1 and r >= edges[idx + 1]:
            idx += 1
        counts[idx] += 1
    return ResidualStats(
        residuals=residuals,
        bin_edges=edges,
        counts=counts,
        five_number=summarize(residuals),
    )


def cross_validate(
    config: ModelConfig, fm: FeatureMatrix, k: int = DEFAULT_CV_FOLDS
) -> CvReport:
    """Walk-forward validation MSE, one fresh fit per fold."""
    plans = time_series_splits(fm.n_rows, k)
    scores = []
    for fold, plan in enumerate(plans, start=1):
        try:
            model = models.fit(
                config, fm.X[plan.train], fm.y[plan.train], fm.feature_names
            )
        except ModelError as exc:
            raise type(exc)(f"fold {fold}/{k}: {exc}") from exc
        except TooFewSamples as exc:
            raise TooFewSamples(f"fold {fold}/{k}: {exc}") from exc
        pred = models.predict(model, fm.X[plan.test])
        scores.append(mse(fm.y[plan.test], pred))
    mean = float(np.mean(scores))
    sd = float(np.std(scores, ddof=1)) if len(scores) > 1 else 0.0
    return CvReport(fold_scores=tuple(scores), mean_score=mean, sd_score=sd)


def evaluate_holdout(
    config: ModelConfig,
    fm: FeatureMatrix,
    train_fraction: float = 0.8,
    k: int = DEFAULT_CV_FOLDS,
) -> ModelMetrics:
    """Fit on the chronological head, measure everywhere.

    corr/mse "full" cover the whole series (so they mix in-sample fit
    and out-of-sample prediction); the holdout pair covers only the
    final block the model never saw. The CvReport comes from the
    training block alone.
    """
    plan = chronological_split(fm.n_rows, train_fraction)
    model = models.fit(config, fm.X[plan.train], fm.y[plan.train], fm.feature_names)
    return metrics_for_model(model, fm, plan, k=k)


def _safe_corr(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson r, NaN when one side is constant (e.g. a lone-leaf tree)."""
    try:
        r, _ = pearson_with_pvalue(a, b)
    except ConstantInput:
        return float("nan")
    return r


def metrics_for_model(
    model: models.TrainedModel,
    fm: FeatureMatrix,
    plan: SplitPlan,
    k: int = DEFAULT_CV_FOLDS,
) -> ModelMetrics:
    """Metrics for an already fitted model (fitted on plan.train)."""
    pred_full = models.predict(model, fm.X)
    corr_full = _safe_corr(fm.y, pred_full)
    corr_hold = _safe_corr(fm.y[plan.test], pred_full[plan.test])
    cv = cross_validate(model.config, fm.subset(plan.train), k=k)
    return ModelMetrics(
        corr_full=corr_full,
        mse_full=mse(fm.y, pred_full),
        corr_holdout=corr_hold,
        mse_holdout=mse(fm.y[plan.test], pred_full[plan.test]),
        cv=cv,
    )
