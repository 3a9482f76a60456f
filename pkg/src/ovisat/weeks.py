"""Epidemiological week grid.

Weeks follow the ISO-8601 numbering. Each week is represented by its
midweek day (Thursday), which is the anchor used when resampling
irregular observations onto the weekly grid.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from .errors import DataError

WEEK_LABEL_FMT = "{year:04d}-W{week:02d}"


def week_midpoint(year: int, week: int) -> dt.date:
    """Thursday of the given ISO week."""
    try:
        return dt.date.fromisocalendar(year, week, 4)
    except ValueError as exc:
        raise DataError(f"invalid ISO week {year}-W{week}: {exc}") from exc


def week_label(year: int, week: int) -> str:
    return WEEK_LABEL_FMT.format(year=year, week=week)


def parse_week_label(label: str) -> tuple[int, int]:
    """Parse a 'YYYY-Www' label into (iso_year, week_number)."""
    try:
        year_s, week_s = label.split("-W")
        year, week = int(year_s), int(week_s)
    except ValueError as exc:
        raise DataError(f"bad week label {label!r}, expected YYYY-Www") from exc
    week_midpoint(year, week)  # validates the pair
    return year, week


@dataclass(frozen=True)
class WeekGrid:
    """A contiguous run of ISO weeks starting at (start_year, start_week)."""

    start_year: int
    start_week: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise DataError("grid length must be >= 1")
        if not 1 <= self.start_week <= 53:
            raise DataError(f"week number {self.start_week} outside [1, 53]")
        week_midpoint(self.start_year, self.start_week)

    def __len__(self) -> int:
        return self.length

    @property
    def start_midpoint(self) -> dt.date:
        return week_midpoint(self.start_year, self.start_week)

    def midpoints(self) -> list[dt.date]:
        """Thursday of every week on the grid, in order."""
        first = self.start_midpoint
        return [first + dt.timedelta(weeks=i) for i in range(self.length)]

    def week_of(self, index: int) -> tuple[int, int]:
        day = self.start_midpoint + dt.timedelta(weeks=index)
        iso = day.isocalendar()
        return iso[0], iso[1]

    def labels(self) -> list[str]:
        return [week_label(*self.week_of(i)) for i in range(self.length)]

    def index_of(self, year: int, week: int) -> int | None:
        """Grid index of the given week, or None if off-grid."""
        delta = (week_midpoint(year, week) - self.start_midpoint).days
        if delta % 7 != 0:
            return None
        idx = delta // 7
        return idx if 0 <= idx < self.length else None

    @classmethod
    def from_label(cls, label: str, length: int) -> "WeekGrid":
        year, week = parse_week_label(label)
        return cls(year, week, length)
