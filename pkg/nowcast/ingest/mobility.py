"""
Google community mobility report parser and trailing moving average.
"""

import logging
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from dateutil.parser import isoparse

from .csv_reader import CsvSource, iter_chunks, normalize_name, parse_float, pick_column, read_header, require_column, resolve_source
from .models import MOBILITY_CATEGORIES, SUSPECT_MOBILITY, MobilityRecord

logger = logging.getLogger(__name__)

SOURCE = "mobility"
CATEGORY_COLUMNS: Dict[str, str] = {
    "retail_recreation": "retail_and_recreation_percent_change_from_baseline",
    "grocery_pharmacy": "grocery_and_pharmacy_percent_change_from_baseline",
    "parks": "parks_percent_change_from_baseline",
    "transit_stations": "transit_stations_percent_change_from_baseline",
    "workplaces": "workplaces_percent_change_from_baseline",
    "residential": "residential_percent_change_from_baseline",
}
_SUB_REGION_COLUMNS = ("sub_region_1", "sub_region_2", "metro_area")


def parse_mobility(snapshot: CsvSource, country: str, sub_region_filter: Optional[str] = None) -> List[MobilityRecord]:
    """
    Country-level rows for ``country`` (name or 2-letter code), or the rows of
    one first-level sub-region when ``sub_region_filter`` is given.
    """
    source = resolve_source(snapshot)
    columns = read_header(source)
    date_col = require_column(columns, ("date",), SOURCE)
    name_col = require_column(columns, ("country_region",), SOURCE)
    code_col = pick_column(columns, ("country_region_code",))
    category_cols = {cat: require_column(columns, (col,), SOURCE) for cat, col in CATEGORY_COLUMNS.items()}
    region_cols = [c for c in _SUB_REGION_COLUMNS if c in columns]

    wanted_name = normalize_name(country)
    wanted_code = country.strip().upper()
    wanted_region = normalize_name(sub_region_filter) if sub_region_filter else None

    by_date: Dict = {}
    for chunk in iter_chunks(source):
        matches = chunk[name_col].map(normalize_name) == wanted_name
        if code_col:
            matches |= chunk[code_col].str.strip().str.upper() == wanted_code
        if wanted_region is None:
            for column in region_cols:
                matches &= chunk[column].str.strip() == ""
        elif "sub_region_1" in region_cols:
            matches &= chunk["sub_region_1"].map(normalize_name) == wanted_region
            for column in region_cols[1:]:
                matches &= chunk[column].str.strip() == ""
        else:
            matches &= False
        for _, row in chunk.loc[matches].iterrows():
            day = isoparse(row[date_col].strip()).date()
            by_date[day] = _build_record(day, row, category_cols)

    if not by_date:
        if wanted_region is not None:
            logger.warning("No mobility rows for sub-region %r of %s", sub_region_filter, country)
        else:
            logger.warning("No country-level mobility rows for %s", country)
        return []

    records = [by_date[day] for day in sorted(by_date)]
    suspect = sum(1 for r in records if r.flags)
    if suspect:
        logger.warning("Mobility %s: %d record(s) hold suspect values beyond +/-%g", country, suspect, SUSPECT_MOBILITY)
    return records


def _build_record(day, row, category_cols: Dict[str, str]) -> MobilityRecord:
    categories: Dict[str, Optional[float]] = {}
    flags = []
    for category, column in category_cols.items():
        value = parse_float(row[column])
        if value is not None and not np.isfinite(value):
            flags.append(f"{category} not finite")
            value = None
        elif value is not None and abs(value) > SUSPECT_MOBILITY:
            flags.append(f"{category} suspect: {value:g}")
        categories[category] = value
    return MobilityRecord(date=day, categories=categories, flags=tuple(flags))


def mobility_frame(records: List[MobilityRecord]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [[r.categories.get(c) for c in MOBILITY_CATEGORIES] for r in records],
        index=pd.DatetimeIndex([pd.Timestamp(r.date) for r in records], name="date"),
        columns=list(MOBILITY_CATEGORIES),
        dtype=float,
    )
    return frame


def moving_average(records: List[MobilityRecord], window_days: int = 7) -> List[MobilityRecord]:
    """
    Trailing ``window_days`` calendar-day mean per category over the values
    present; a window with nothing present stays missing.
    """
    if window_days < 1:
        raise ValueError(f"window_days must be >= 1, got {window_days}")
    if not records:
        return []

    frame = mobility_frame(records)
    daily = frame.reindex(pd.date_range(frame.index.min(), frame.index.max(), freq="D"))
    averaged = daily.rolling(window_days, min_periods=1).mean().loc[frame.index]

    out = []
    for record, (_, row) in zip(records, averaged.iterrows()):
        categories = {c: (None if pd.isna(row[c]) else float(row[c])) for c in MOBILITY_CATEGORIES}
        out.append(MobilityRecord(date=record.date, categories=categories, flags=record.flags))
    return out
