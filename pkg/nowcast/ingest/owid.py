"""
Our World in Data case parser.

Turns the compact OWID CSV into a contiguous daily CaseSeries for one ISO
code, plus OWID's own 7-day smoothed column.
"""

import logging
from typing import Dict

import numpy as np
import pandas as pd

from nowcast.rt_core.models import CaseSeries, SmoothedSeries

from .csv_reader import CsvSource, iter_chunks, parse_float, pick_column, read_header, require_column, resolve_source
from .errors import CountryNotFoundError

logger = logging.getLogger(__name__)

SOURCE = "owid"
DATE_ALIASES = ("date",)
ISO_ALIASES = ("iso_code", "code")
NEW_CASES_ALIASES = ("new_cases",)
SMOOTHED_ALIASES = ("new_cases_smoothed",)
LOCATION_ALIASES = ("location", "country")

FLAG_MISSING = "missing"
FLAG_CLAMPED = "clamped"
FLAG_FILLED = "filled"
FLAG_DUPLICATE = "duplicate"


def parse_owid(snapshot: CsvSource, iso_code: str) -> CaseSeries:
    """
    Daily new cases for ``iso_code``.

    Blank cells become 0 (flagged missing), negative revisions are clamped to
    0 (flagged clamped) and absent days are filled with 0 (flagged filled).
    """
    source = resolve_source(snapshot)
    columns = read_header(source)
    date_col = require_column(columns, DATE_ALIASES, SOURCE)
    iso_col = require_column(columns, ISO_ALIASES, SOURCE)
    cases_col = require_column(columns, NEW_CASES_ALIASES, SOURCE)
    smoothed_col = require_column(columns, SMOOTHED_ALIASES, SOURCE)
    location_col = pick_column(columns, LOCATION_ALIASES)

    wanted = [c for c in (date_col, iso_col, cases_col, smoothed_col, location_col) if c]
    iso = iso_code.strip().upper()
    hits = []
    for chunk in iter_chunks(source, usecols=wanted):
        match = chunk[chunk[iso_col].str.strip().str.upper() == iso]
        if not match.empty:
            hits.append(match)
    if not hits:
        raise CountryNotFoundError(iso, SOURCE)

    frame = pd.concat(hits, ignore_index=True)
    frame["_date"] = pd.to_datetime(frame[date_col].str.strip(), format="ISO8601").dt.normalize()
    frame = frame.sort_values("_date", kind="stable")

    flags: Dict = {}
    duplicated = frame["_date"].duplicated(keep="last")
    for stamp in frame.loc[duplicated, "_date"]:
        flags[stamp.date()] = FLAG_DUPLICATE
    frame = frame.loc[~duplicated]

    raw_values = []
    clamped_sum = 0.0
    unclamped_sum = 0.0
    clamped_rows = 0
    for stamp, cell in zip(frame["_date"], frame[cases_col]):
        value = parse_float(cell)
        if value is None:
            flags[stamp.date()] = FLAG_MISSING
            raw_values.append(0)
            continue
        if value < 0:
            flags[stamp.date()] = FLAG_CLAMPED
            clamped_sum += value
            clamped_rows += 1
            raw_values.append(0)
            continue
        unclamped_sum += value
        raw_values.append(int(round(value)))

    observed = pd.Series(raw_values, index=pd.DatetimeIndex(frame["_date"]), dtype=np.int64)
    full_range = pd.date_range(observed.index.min(), observed.index.max(), freq="D")
    for stamp in full_range.difference(observed.index):
        flags[stamp.date()] = FLAG_FILLED
    counts = observed.reindex(full_range, fill_value=0)

    smoothed_values = pd.Series(
        [parse_float(cell) for cell in frame[smoothed_col]],
        index=observed.index,
        dtype=float,
    )
    smoothed_values = smoothed_values.reindex(full_range).fillna(0.0).clip(lower=0.0)

    location = None
    if location_col:
        names = [n.strip() for n in frame[location_col] if n and n.strip()]
        location = names[0] if names else None

    if flags:
        summary: Dict[str, int] = {}
        for reason in flags.values():
            summary[reason] = summary.get(reason, 0) + 1
        logger.warning("OWID %s: modified %s day(s)", iso, ", ".join(f"{n} {r}" for r, n in sorted(summary.items())))

    return CaseSeries(
        counts=counts,
        source_label=f"{SOURCE}:{iso}",
        location=location,
        flags=dict(sorted(flags.items())),
        clamp_audit={
            "clamped_rows": clamped_rows,
            "clamped_raw_sum": clamped_sum,
            "unclamped_raw_sum": unclamped_sum,
            "raw_total": clamped_sum + unclamped_sum,
        },
        source_smoothed=SmoothedSeries(values=smoothed_values.rename("smoothed"), window_days=7, window_std=0.0),
    )
