"""Raw observation parsing and alignment onto the weekly grid.

Satellite index extracts arrive as irregular dated samples (composite
products have 8- or 16-day cadence); ovitrap egg counts arrive as
per-house weekly records. Everything downstream works on WeeklySeries:
one value per epidemiological week, linearly interpolated at the week's
Thursday midpoint. Weeks outside the raw date span stay missing (NaN);
values are never extrapolated.
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataError,
    DuplicateDate,
    EmptyFile,
    MalformedRow,
    NoOverlap,
    ZeroVariance,
)
from .weeks import WeekGrid


class Zone(enum.Enum):
    URBAN = "urban"
    RURAL = "rural"
    NONE = "none"

    def __str__(self) -> str:
        return self.value


class Placement(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RawSeries:
    """Irregularly sampled observations of one variable.

    Observations are (date, value) pairs, strictly increasing in date.
    """

    name: str
    zone: Zone
    observations: tuple[tuple[dt.date, float], ...]

    def __post_init__(self):
        if len(self.observations) < 2:
            raise DataError(
                f"series {self.name!r} needs >= 2 observations for interpolation"
            )
        dates = [d for d, _ in self.observations]
        for a, b in zip(dates, dates[1:]):
            if a == b:
                raise DuplicateDate(f"series {self.name!r}: duplicate date {a}")
            if a > b:
                raise DataError(f"series {self.name!r}: dates not increasing")

    @property
    def key(self) -> str:
        """Canonical library key: 'name:zone', bare name when zone is none."""
        if self.zone is Zone.NONE:
            return self.name
        return f"{self.name}:{self.zone.value}"

    @property
    def span(self) -> tuple[dt.date, dt.date]:
        return self.observations[0][0], self.observations[-1][0]


@dataclass(frozen=True)
class WeeklySeries:
    """One variable sampled on a contiguous weekly grid. NaN marks missing."""

    name: str
    grid: WeekGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) != self.grid.length:
            raise DataError(
                f"series {self.name!r}: {len(vals)} values for a "
                f"{self.grid.length}-week grid"
            )
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)

    def __len__(self) -> int:
        return self.grid.length

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)


@dataclass(frozen=True)
class OvitrapRecord:
    house_id: str
    placement: Placement
    week: tuple[int, int]  # (iso_year, week_number)
    egg_count: int

    def __post_init__(self):
        if self.egg_count < 0:
            raise DataError(f"negative egg count for house {self.house_id!r}")


def parse_raw_series(path, name: str, zone: Zone) -> RawSeries:
    """Read a `date,value` CSV into a RawSeries.

    Dates must be ISO-8601; rows may appear in any order and are sorted.
    Duplicate dates are rejected.
    """
    rows: list[tuple[dt.date, float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyFile(f"{path}: empty file")
        if [h.strip().lower() for h in header] != ["date", "value"]:
            raise MalformedRow(path, 1, f"expected header 'date,value', got {header}")
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise MalformedRow(path, line_no, f"expected 2 fields, got {len(row)}")
            try:
                date = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise MalformedRow(path, line_no, f"bad date {row[0]!r}") from None
            try:
                value = float(row[1])
            except ValueError:
                raise MalformedRow(path, line_no, f"bad value {row[1]!r}") from None
            if not math.isfinite(value):
                raise MalformedRow(path, line_no, f"non-finite value {row[1]!r}")
            rows.append((date, value))
    if not rows:
        raise EmptyFile(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    for (d0, _), (d1, _) in zip(rows, rows[1:]):
        if d0 == d1:
            raise DuplicateDate(f"{path}: duplicate date {d0}")
    return RawSeries(name=name, zone=zone, observations=tuple(rows))


def parse_ovitrap_records(path) -> list[OvitrapRecord]:
    """Read a `house_id,placement,iso_year,iso_week,egg_count` CSV."""
    expected = ["house_id", "placement", "iso_year", "iso_week", "egg_count"]
    records: list[OvitrapRecord] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyFile(f"{path}: empty file")
        if [h.strip().lower() for h in header] != expected:
            raise MalformedRow(path, 1, f"expected header {','.join(expected)}")
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 5:
                raise MalformedRow(path, line_no, f"expected 5 fields, got {len(row)}")
            try:
                placement = Placement(row[1].strip().lower())
            except ValueError:
                raise MalformedRow(
                    path, line_no, f"placement must be inside/outside, got {row[1]!r}"
                ) from None
            try:
                year, week, eggs = int(row[2]), int(row[3]), int(row[4])
            except ValueError:
                raise MalformedRow(path, line_no, "non-integer year/week/count") from None
            if eggs < 0:
                raise MalformedRow(path, line_no, f"negative egg count {eggs}")
            records.append(
                OvitrapRecord(row[0].strip(), placement, (year, week), eggs)
            )
    if not records:
        raise EmptyFile(f"{path}: no data rows")
    return records


def interpolate_to_weekly(s: RawSeries, grid: WeekGrid) -> WeeklySeries:
    """Resample a RawSeries onto the grid by linear interpolation.

    Each week's value is taken at the week's Thursday. Weeks whose
    Thursday falls outside the raw date span are left missing.
    """
    first, last = s.span
    dates = [d for d, _ in s.observations]
    raw_days = np.array([d.toordinal() for d in dates], dtype=float)
    raw_vals = np.array([v for _, v in s.observations], dtype=float)

    values = np.full(grid.length, np.nan)
    any_inside = False
    for i, mid in enumerate(grid.midpoints()):
        if mid < first or mid > last:
            continue
        any_inside = True
        day = mid.toordinal()
        j = int(np.searchsorted(raw_days, day, side="left"))
        if raw_days[j] == day:
            values[i] = raw_vals[j]
            continue
        d0, d1 = raw_days[j - 1], raw_days[j]
        v0, v1 = raw_vals[j - 1], raw_vals[j]
        values[i] = v0 + (v1 - v0) * (day - d0) / (d1 - d0)
    if not any_inside:
        raise NoOverlap(
            f"series {s.key!r} ({first}..{last}) does not overlap the grid"
        )
    return WeeklySeries(name=s.key, grid=grid, values=values)


def aggregate_oviposition(
    records: list[OvitrapRecord], grid: WeekGrid, name: str = "oviposition"
) -> WeeklySeries:
    """Weekly sum of egg counts over the outside traps.

    Inside-trap records are ignored; weeks with no records get 0.
    Records falling off the grid are dropped.
    """
    values = np.zeros(grid.length)
    for rec in records:
        if rec.placement is not Placement.OUTSIDE:
            continue
        idx = grid.index_of(*rec.week)
        if idx is not None:
            values[idx] += rec.egg_count
    return WeeklySeries(name=name, grid=grid, values=values)


def zscore(s: WeeklySeries) -> tuple[WeeklySeries, float, float]:
    """Standardize a series; returns (scaled series, mean, sd).

    Mean and sample sd (divisor n-1) are computed over non-missing
    values and returned so predictions can be mapped back to counts.
    """
    values, mean, sd = zscore_values(s.values)
    return WeeklySeries(name=s.name, grid=s.grid, values=values), mean, sd


def zscore_values(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """zscore on a bare vector; NaNs pass through untouched."""
    values = np.asarray(values, dtype=float)
    present = values[~np.isnan(values)]
    if len(present) < 2:
        raise DataError("need >= 2 non-missing values to standardize")
    mean = float(np.mean(present))
    sd = float(np.std(present, ddof=1))
    if sd == 0.0:
        raise ZeroVariance("series is constant, cannot standardize")
    return (values - mean) / sd, mean, sd
