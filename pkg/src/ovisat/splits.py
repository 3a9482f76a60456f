"""Chronological train/test splitting and walk-forward folds.

Both splitters only ever place training indices strictly before test
indices; shuffled k-fold is deliberately absent since row order is
time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooFewSamples


@dataclass(frozen=True)
class SplitPlan:
    """One train/test index pair with the training block entirely earlier."""

    train_idx: tuple[int, ...]
    test_idx: tuple[int, ...]

    def __post_init__(self):
        if not self.train_idx or not self.test_idx:
            raise TooFewSamples("both split sides must be non-empty")
        if max(self.train_idx) >= min(self.test_idx):
            raise TooFewSamples("training indices must precede test indices")

    @property
    def train(self) -> np.ndarray:
        return np.asarray(self.train_idx, dtype=int)

    @property
    def test(self) -> np.ndarray:
        return np.asarray(self.test_idx, dtype=int)


def chronological_split(n: int, train_fraction: float) -> SplitPlan:
    """First floor(n * train_fraction) rows train, the rest test."""
    if not 0.0 < train_fraction < 1.0:
        raise TooFewSamples(f"train_fraction must be in (0, 1), got {train_fraction}")
    if n < 5:
        raise TooFewSamples(f"need n >= 5, got {n}")
    cut = int(n * train_fraction)
    if cut < 1 or cut >= n:
        raise TooFewSamples(f"fraction {train_fraction} leaves an empty side for n={n}")
    return SplitPlan(tuple(range(cut)), tuple(range(cut, n)))


def time_series_splits(n: int, k: int) -> list[SplitPlan]:
    """Walk-forward folds over n rows.

    The range is cut into k+1 contiguous blocks as equal as possible,
    with the remainder going to the earliest blocks. Fold i trains on
    blocks 1..i and validates on block i+1, so training always grows
    and never sees the future.
    """
    if k < 2:
        raise TooFewSamples(f"need k >= 2 folds, got {k}")
    if n < k + 1:
        raise TooFewSamples(f"need n >= k+1 rows, got n={n}, k={k}")
    base, rem = divmod(n, k + 1)
    sizes = [base + 1 if i < rem else base for i in range(k + 1)]
    bounds = np.cumsum([0] + sizes)
    plans = []
    for i in range(1, k + 1):
        train = tuple(range(bounds[i]))
        test = tuple(range(bounds[i], bounds[i + 1]))
        plans.append(SplitPlan(train, test))
    return plans
