"""Derived indices, lagged columns, significance screening, design matrix.

Candidate predictors are lagged copies (0..3 weeks) of the weekly
environmental series. Screening keeps the candidates whose Pearson
correlation with the target is significant, preferring lagged variants
over lag 0 so the kept set retains forecasting value, and the design
matrix is the z-scored stack of the surviving columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import WeeklySeries, Zone, zscore_values
from .errors import (
    ConstantInput,
    DataError,
    GridMismatch,
    LagTooLarge,
    LengthMismatch,
    NoSignificantFeatures,
    UnknownVariable,
    ZeroDenominator,
)

MAX_LAG = 3


@dataclass(frozen=True, order=True)
class FeatureSpec:
    """One candidate predictor: a variable in a zone at a weekly lag."""

    variable: str
    zone: Zone
    lag_weeks: int

    def __post_init__(self):
        if self.lag_weeks not in range(MAX_LAG + 1):
            raise DataError(f"lag must be in 0..{MAX_LAG}, got {self.lag_weeks}")

    @property
    def series_key(self) -> str:
        if self.zone is Zone.NONE:
            return self.variable
        return f"{self.variable}:{self.zone.value}"

    def __str__(self) -> str:
        return f"{self.variable}:{self.zone.value}:lag{self.lag_weeks}"

    @classmethod
    def parse(cls, text: str) -> "FeatureSpec":
        """Parse the 'variable:zone:lagN' config form."""
        parts = text.strip().split(":")
        if len(parts) != 3 or not parts[2].startswith("lag"):
            raise DataError(f"bad feature spec {text!r}, expected variable:zone:lagN")
        try:
            zone = Zone(parts[1])
        except ValueError:
            raise DataError(f"bad zone in feature spec {text!r}") from None
        try:
            lag = int(parts[2][3:])
        except ValueError:
            raise DataError(f"bad lag in feature spec {text!r}") from None
        return cls(parts[0], zone, lag)


@dataclass(frozen=True)
class Candidate:
    """Screening outcome for one candidate column."""

    spec: FeatureSpec
    r: float
    p: float
    selected: bool


@dataclass(frozen=True)
class ScreeningResult:
    candidates: tuple[Candidate, ...]

    @property
    def selected(self) -> tuple[FeatureSpec, ...]:
        return tuple(c.spec for c in self.candidates if c.selected)


@dataclass(frozen=True)
class FeatureMatrix:
    """Aligned, fully observed, z-scored design matrix plus target.

    Column j of X is the z-scored lagged series for specs[j]; y is the
    z-scored target. Per-column means/sds (and the target's) are kept so
    new raw data can be mapped into the same space and predictions
    mapped back to egg counts.
    """

    specs: tuple[FeatureSpec, ...]
    week_labels: tuple[str, ...]
    X: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    feature_means: np.ndarray = field(repr=False)
    feature_sds: np.ndarray = field(repr=False)
    target_mean: float
    target_sd: float

    def __post_init__(self):
        if self.X.shape != (len(self.week_labels), len(self.specs)):
            raise DataError("feature matrix shape inconsistent with specs/rows")
        if len(self.y) != len(self.week_labels):
            raise DataError("target length inconsistent with rows")
        for arr in (self.X, self.y, self.feature_means, self.feature_sds):
            arr.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(str(s) for s in self.specs)

    def subset(self, idx) -> "FeatureMatrix":
        """Row subset (e.g. the training block), keeping the scaling."""
        idx = np.asarray(idx, dtype=int)
        return FeatureMatrix(
            specs=self.specs,
            week_labels=tuple(self.week_labels[i] for i in idx),
            X=self.X[idx].copy(),
            y=self.y[idx].copy(),
            feature_means=self.feature_means.copy(),
            feature_sds=self.feature_sds.copy(),
            target_mean=self.target_mean,
            target_sd=self.target_sd,
        )


def compute_ndwi(nir, mir):
    """Normalized difference water index from stored integer reflectances.

    Bands arrive scaled by 1e4 (stored as integers); the scale cancels in
    the ratio, so the result is the dimensionless (nir-mir)/(nir+mir).
    Accepts scalars or arrays.
    """
    nir = np.asarray(nir, dtype=float)
    mir = np.asarray(mir, dtype=float)
    denom = nir + mir
    if np.any(denom == 0):
        raise ZeroDenominator("nir + mir is zero")
    out = (nir - mir) / denom
    return float(out) if out.ndim == 0 else out


def make_lags(
    s: WeeklySeries, lags: set[int] | list[int]
) -> list[tuple[str, np.ndarray]]:
    """Shifted copies of a weekly series, one column per requested lag.

    Column for lag L holds value(t - L); its first L entries are missing.
    """
    lags = sorted(set(int(l) for l in lags))
    if any(l < 0 for l in lags):
        raise DataError("lags must be non-negative")
    if any(l > MAX_LAG for l in lags):
        raise LagTooLarge(f"lags above {MAX_LAG} weeks are not supported")
    if lags and max(lags) >= len(s):
        raise LagTooLarge(f"lag {max(lags)} >= series length {len(s)}")
    columns = []
    for lag in lags:
        col = np.full(len(s), np.nan)
        if lag == 0:
            col[:] = s.values
        else:
            col[lag:] = s.values[:-lag]
        columns.append((f"{s.name}:lag{lag}", col))
    return columns


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    EPS = 1e-12
    FPMIN = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # the continued fraction converges fast only on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def pearson_with_pvalue(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Sample Pearson correlation with a two-sided p-value.

    The p-value comes from t = r*sqrt((n-2)/(1-r^2)) against Student's t
    with n-2 degrees of freedom, evaluated through the regularized
    incomplete beta. Perfect correlation returns p = 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"shapes {x.shape} and {y.shape} differ")
    n = len(x)
    if n < 3:
        raise DataError("need n >= 3 for a p-value")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInput("correlation undefined for a constant vector")
    r = float(np.dot(dx, dy) / math.sqrt(sxx * syy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    p = betainc_regularized(df / 2.0, 0.5, df / (df + t2))
    return r, min(1.0, max(0.0, p))


def select_features(
    candidates: list[tuple[FeatureSpec, np.ndarray]],
    target: np.ndarray,
    alpha: float = 0.05,
    max_features: int = 5,
) -> ScreeningResult:
    """Significance screening of candidate columns against the target.

    Keeps the top `max_features` candidates by |r| among those with
    p < alpha. When a lag-0 candidate and a lagged variant of the same
    (variable, zone) both pass, the lag-0 one is dropped. Ties in |r|
    prefer the larger lag, then the lexicographically smaller spec name.
    Candidates whose correlation is undefined (constant column, too few
    paired rows) are reported with r=0, p=1 and never selected.
    """
    if not 0.0 < alpha <= 1.0:
        raise DataError(f"alpha must be in (0, 1], got {alpha}")
    if max_features < 1:
        raise DataError("max_features must be >= 1")
    if not candidates:
        raise NoSignificantFeatures("no candidates supplied")
    target = np.asarray(target, dtype=float)

    stats: list[tuple[FeatureSpec, float, float]] = []
    for spec, col in candidates:
        col = np.asarray(col, dtype=float)
        if col.shape != target.shape:
            raise LengthMismatch(
                f"candidate {spec} not aligned to target "
                f"({col.shape} vs {target.shape})"
            )
        ok = ~(np.isnan(col) | np.isnan(target))
        try:
            if ok.sum() < 3:
                raise ConstantInput("too few paired rows")
            r, p = pearson_with_pvalue(col[ok], target[ok])
        except (ConstantInput, DataError):
            r, p = 0.0, 1.0
        stats.append((spec, r, p))

    qualifying = [(spec, r, p) for spec, r, p in stats if p < alpha]
    if not qualifying:
        raise NoSignificantFeatures(
            f"no candidate passed the p < {alpha} screen"
        )

    # drop lag-0 candidates shadowed by a qualifying lagged variant
    lagged_keys = {
        (s.variable, s.zone) for s, _, _ in qualifying if s.lag_weeks > 0
    }
    ranked = [
        (spec, r, p)
        for spec, r, p in qualifying
        if not (spec.lag_weeks == 0 and (spec.variable, spec.zone) in lagged_keys)
    ]
    ranked.sort(key=lambda t: (-abs(t[1]), -t[0].lag_weeks, str(t[0])))
    chosen_ids = {id(spec) for spec, _, _ in ranked[:max_features]}

    result = tuple(
        Candidate(spec, r, p, selected=id(spec) in chosen_ids) for spec, r, p in stats
    )
    return ScreeningResult(result)


def assemble_matrix(
    specs: list[FeatureSpec],
    library: dict[str, WeeklySeries],
    target: WeeklySeries,
) -> FeatureMatrix:
    """Build the aligned design matrix for the given specs.

    Applies each spec's lag, drops every row with any missing entry
    (leading lag rows and any unfilled grid edges), then z-scores each
    surviving column and the target.
    """
    if not specs:
        raise DataError("no feature specs supplied")
    columns = []
    for spec in specs:
        series = library.get(spec.series_key)
        if series is None:
            raise UnknownVariable(f"no series {spec.series_key!r} in the library")
        if series.grid != target.grid:
            raise GridMismatch(
                f"series {spec.series_key!r} is on a different grid than the target"
            )
        (_, col), = make_lags(series, [spec.lag_weeks])
        columns.append(col)

    X_raw = np.column_stack(columns)
    y_raw = np.asarray(target.values, dtype=float)
    keep = ~(np.isnan(X_raw).any(axis=1) | np.isnan(y_raw))
    if keep.sum() < 2:
        raise DataError("fewer than 2 fully observed rows after lag alignment")
    X_raw = X_raw[keep]
    y_raw = y_raw[keep]
    labels = [lab for lab, k in zip(target.grid.labels(), keep) if k]

    means = np.empty(X_raw.shape[1])
    sds = np.empty(X_raw.shape[1])
    X = np.empty_like(X_raw)
    for j in range(X_raw.shape[1]):
        X[:, j], means[j], sds[j] = zscore_values(X_raw[:, j])
    y, t_mean, t_sd = zscore_values(y_raw)

    return FeatureMatrix(
        specs=tuple(specs),
        week_labels=tuple(labels),
        X=X,
        y=y,
        feature_means=means,
        feature_sds=sds,
        target_mean=t_mean,
        target_sd=t_sd,
    )
