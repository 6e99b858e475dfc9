"""
Case-series preparation: centered Gaussian smoothing and leading-trim.
"""

import logging

import numpy as np

from .errors import CutoffNotReachedError, EmptyInputError, EstimationError
from .models import CaseSeries, SmoothedSeries

logger = logging.getLogger(__name__)


def smooth_cases(series: CaseSeries, window_days: int = 7, window_std: float = 2.0) -> SmoothedSeries:
    """
    Centered Gaussian-weighted rolling mean of the raw counts.

    Weights are exp(-d^2 / (2 std^2)) for offsets d in the window; at the
    series edges the weights of the days that exist are renormalized.
    """
    if len(series) == 0:
        raise EmptyInputError("case series has no dates")
    if window_days < 1 or window_days % 2 == 0:
        raise EstimationError(f"window_days must be odd and >= 1, got {window_days}")
    if not window_std > 0:
        raise EstimationError(f"window_std must be > 0, got {window_std}")

    raw = series.counts.astype(float)
    smoothed = raw.rolling(window_days, win_type="gaussian", min_periods=1, center=True).mean(std=window_std)
    smoothed = smoothed.clip(lower=0.0).rename("smoothed")
    return SmoothedSeries(values=smoothed, window_days=window_days, window_std=window_std)


def trim_leading(series: SmoothedSeries, cutoff: float) -> SmoothedSeries:
    """Drop the prefix of days whose smoothed value is below ``cutoff``."""
    if cutoff < 0:
        raise EstimationError(f"cutoff must be >= 0, got {cutoff}")
    reached = np.flatnonzero(series.values.to_numpy() >= cutoff)
    if reached.size == 0:
        raise CutoffNotReachedError(cutoff)

    start = int(reached[0])
    if start:
        logger.debug("Trimmed %d leading day(s) below cutoff %g", start, cutoff)
    return SmoothedSeries(
        values=series.values.iloc[start:],
        window_days=series.window_days,
        window_std=series.window_std,
    )
