"""
Oxford government-response tracker parser (national rows only).
"""

import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

from dateutil.parser import isoparse

from .csv_reader import CsvSource, iter_chunks, normalize_name, parse_float, pick_column, read_header, require_column, resolve_source
from .errors import CountryNotFoundError, SchemaDriftError
from .models import INDICATOR_RANGES, REQUIRED_INDICATORS, PolicyRecord

logger = logging.getLogger(__name__)

SOURCE = "oxcgrt"

# Ordered by preference; the first variant present is the record's stringency_index.
STRINGENCY_VARIANTS: Tuple[Tuple[str, Tuple[str, ...]], ...] = (
    ("display", ("StringencyIndexForDisplay", "StringencyIndex_Average_ForDisplay")),
    ("legacy", ("StringencyLegacyIndexForDisplay", "StringencyLegacyIndex")),
    ("plain", ("StringencyIndex", "StringencyIndex_Average")),
)
# Plain codes first, then the majority/everyone and vaccinated/non-vaccinated
# variants newer files use.
_INDICATOR_SUFFIXES = ("", "M", "E", "NV", "EV", "V")


def indicator_column(columns: Sequence[str], code: str) -> Optional[str]:
    for suffix in _INDICATOR_SUFFIXES:
        pattern = re.compile(rf"^{code}{suffix}_")
        for column in columns:
            if pattern.match(column) and not column.endswith("_Flag"):
                return column
    return None


def _parse_ordinal(cell: str, code: str) -> Tuple[Optional[int], Optional[str]]:
    value = parse_float(cell)
    if value is None:
        return None, None
    low, high = INDICATOR_RANGES[code]
    level = int(round(value))
    if level != value or not low <= level <= high:
        return None, f"{code} out of range: {cell.strip()}"
    return level, None


def parse_oxcgrt(snapshot: CsvSource, country: str) -> List[PolicyRecord]:
    """
    One PolicyRecord per date for ``country`` (name or ISO-3 code).

    Blank cells are missing. Out-of-range values are dropped and flagged.
    """
    source = resolve_source(snapshot)
    columns = read_header(source)
    date_col = require_column(columns, ("Date",), SOURCE)
    name_col = require_column(columns, ("CountryName",), SOURCE)
    code_col = require_column(columns, ("CountryCode",), SOURCE)
    jurisdiction_col = pick_column(columns, ("Jurisdiction",))
    region_col = pick_column(columns, ("RegionName",))

    stringency_cols: Dict[str, str] = {}
    for variant, aliases in STRINGENCY_VARIANTS:
        column = pick_column(columns, aliases)
        if column:
            stringency_cols[variant] = column
    if not stringency_cols:
        raise SchemaDriftError(STRINGENCY_VARIANTS[0][1][0], SOURCE)

    indicator_cols: Dict[str, str] = {}
    for code in INDICATOR_RANGES:
        column = indicator_column(columns, code)
        if column:
            indicator_cols[code] = column
        elif code in REQUIRED_INDICATORS:
            raise SchemaDriftError(f"{code}_*", SOURCE)

    wanted_name = normalize_name(country)
    wanted_code = country.strip().upper()
    by_date: Dict = {}
    for chunk in iter_chunks(source):
        matches = (chunk[name_col].map(normalize_name) == wanted_name) | (chunk[code_col].str.strip().str.upper() == wanted_code)
        if jurisdiction_col:
            matches &= chunk[jurisdiction_col].str.strip().isin(("NAT_TOTAL", ""))
        elif region_col:
            matches &= chunk[region_col].str.strip() == ""
        for _, row in chunk.loc[matches].iterrows():
            day = isoparse(row[date_col].strip()).date()
            by_date[day] = _build_record(day, row, stringency_cols, indicator_cols)

    if not by_date:
        raise CountryNotFoundError(country, SOURCE)

    records = [by_date[day] for day in sorted(by_date)]
    flagged = sum(1 for r in records if r.flags)
    if flagged:
        logger.warning("OxCGRT %s: %d record(s) carry flags", country, flagged)
    logger.info("Parsed %d OxCGRT records for %s", len(records), country)
    return records


def _build_record(day, row, stringency_cols: Dict[str, str], indicator_cols: Dict[str, str]) -> PolicyRecord:
    flags = []
    variants: Dict[str, Optional[float]] = {}
    for variant, column in stringency_cols.items():
        value = parse_float(row[column])
        if value is not None and not 0 <= value <= 100:
            flags.append(f"stringency {variant} out of range: {value}")
            value = None
        variants[variant] = value

    chosen_variant = None
    chosen_value = None
    for variant, value in variants.items():
        if value is not None:
            chosen_variant, chosen_value = variant, value
            break

    indicators: Dict[str, Optional[int]] = {}
    for code, column in indicator_cols.items():
        level, problem = _parse_ordinal(row[column], code)
        indicators[code] = level
        if problem:
            flags.append(problem)

    return PolicyRecord(
        date=day,
        stringency_index=chosen_value,
        stringency_variant=chosen_variant,
        stringency_variants=variants,
        indicators=indicators,
        flags=tuple(flags),
    )


def find_stringency_variant(records: List[PolicyRecord], values: Sequence[float], start, end) -> Optional[str]:
    """First stringency variant whose values within [start, end] include every one of ``values``."""
    window = [r for r in records if start <= r.date <= end]
    for variant, _ in STRINGENCY_VARIANTS:
        seen = {round(r.stringency_variants.get(variant), 2) for r in window if r.stringency_variants.get(variant) is not None}
        if all(round(v, 2) in seen for v in values):
            return variant
    return None
