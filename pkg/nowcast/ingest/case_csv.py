"""
CaseSeries CSV schema shared by the simulator and the estimator input.

Columns: date,new_cases[,expected_cases]. ISO dates, LF line endings.
"""

import logging
from datetime import date
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from nowcast.rt_core.models import CaseSeries

from .errors import SchemaDriftError
from .owid import FLAG_FILLED, FLAG_MISSING

logger = logging.getLogger(__name__)

COLUMNS = ("date", "new_cases")


def write_case_series(series: CaseSeries, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"new_cases": series.counts.to_numpy()}, index=series.dates.strftime("%Y-%m-%d"))
    if series.expected is not None:
        frame["expected_cases"] = series.expected.to_numpy()
    frame.index.name = "date"
    frame.to_csv(path, lineterminator="\n", float_format="%.10g")
    return path


def read_case_series(path: Union[str, Path], label: str = "") -> CaseSeries:
    """
    Read a case CSV back. Days absent between the first and last date are
    filled with 0 and flagged, the same way OWID gaps are.
    """
    path = Path(path)
    frame = pd.read_csv(path, dtype={"date": str})
    for column in COLUMNS:
        if column not in frame.columns:
            raise SchemaDriftError(column, path.name)
    dates = pd.DatetimeIndex(pd.to_datetime(frame["date"], format="ISO8601")).normalize()
    if dates.has_duplicates:
        raise SchemaDriftError("date", f"{path.name} (duplicate dates)")

    observed = pd.Series(frame["new_cases"].to_numpy(dtype=float), index=dates).sort_index()
    flags: Dict[date, str] = {}
    for stamp in observed.index[observed.isna()]:
        flags[stamp.date()] = FLAG_MISSING
    full_range = pd.date_range(observed.index.min(), observed.index.max(), freq="D") if len(observed) else observed.index
    for stamp in full_range.difference(observed.index):
        flags[stamp.date()] = FLAG_FILLED
    counts = observed.reindex(full_range).fillna(0.0).round().astype("int64")
    if flags:
        logger.warning("%s: filled %d day(s) with 0", path.name, len(flags))

    expected = None
    if "expected_cases" in frame.columns:
        expected = pd.Series(frame["expected_cases"].to_numpy(dtype=float), index=dates, name="expected_cases")
        expected = expected.sort_index().reindex(full_range)
    return CaseSeries(
        counts=counts,
        source_label=label or f"file:{path.stem}",
        flags=dict(sorted(flags.items())),
        expected=expected,
    )
