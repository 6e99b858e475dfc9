import numpy as np
import pandas as pd
import pytest

from conftest import make_cases
from nowcast.rt_core import CutoffNotReachedError, EmptyInputError, SmoothedSeries, smooth_cases, trim_leading
from nowcast.rt_core.errors import EstimationError


def test_constant_series_is_unchanged():
    smoothed = smooth_cases(make_cases([50] * 20))
    np.testing.assert_allclose(smoothed.values.to_numpy(), 50.0)
    assert smoothed.window_days == 7
    assert smoothed.window_std == 2.0


def test_interior_point_uses_gaussian_weights():
    counts = np.zeros(15, dtype=np.int64)
    counts[7] = 100
    smoothed = smooth_cases(make_cases(counts), window_days=7, window_std=2.0)
    offsets = np.arange(-3, 4)
    weights = np.exp(-(offsets**2) / (2 * 2.0**2))
    expected_center = 100 * weights[3] / weights.sum()
    assert smoothed.values.iloc[7] == pytest.approx(expected_center)
    # symmetric spread around the spike
    assert smoothed.values.iloc[6] == pytest.approx(smoothed.values.iloc[8])
    assert smoothed.values.iloc[3] == 0.0


def test_edges_renormalize_weights():
    smoothed = smooth_cases(make_cases([10, 10, 10, 40]))
    # first point sees only itself and days to the right, all equal to 10
    assert smoothed.values.iloc[0] > 10.0
    assert smoothed.values.iloc[-1] < 40.0
    assert smoothed.values.iloc[-1] > 10.0


def test_dates_and_length_preserved():
    cases = make_cases(range(30))
    smoothed = smooth_cases(cases)
    assert list(smoothed.dates) == list(cases.dates)
    assert (smoothed.values >= 0).all()


def test_smooth_rejects_empty_and_bad_window():
    with pytest.raises(EmptyInputError, match="^empty input"):
        smooth_cases(make_cases([]))
    with pytest.raises(EstimationError):
        smooth_cases(make_cases([1, 2, 3]), window_days=6)
    with pytest.raises(EstimationError):
        smooth_cases(make_cases([1, 2, 3]), window_std=0)


def _series(values):
    index = pd.date_range("2021-03-01", periods=len(values), freq="D")
    return SmoothedSeries(values=pd.Series(values, index=index, dtype=float))


def test_trim_leading_drops_prefix_below_cutoff():
    trimmed = trim_leading(_series([0, 2, 9.9, 10, 3, 25]), 10)
    assert list(trimmed.values) == [10, 3, 25]
    assert trimmed.dates[0] == pd.Timestamp("2021-03-04")


def test_trim_leading_keeps_series_already_above_cutoff():
    series = _series([12, 11, 30])
    assert list(trim_leading(series, 10).values) == [12, 11, 30]


def test_trim_leading_raises_when_cutoff_never_reached():
    with pytest.raises(CutoffNotReachedError, match="^series never reaches cutoff"):
        trim_leading(_series([1, 2, 3]), 10)
