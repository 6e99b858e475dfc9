"""
Google Trends "interest over time" CSV export parser (local files only).
"""

import io
import logging
import re
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd
from dateutil.parser import isoparse

from .errors import NotATrendsExportError
from .models import TrendsRecord

logger = logging.getLogger(__name__)

PERIOD_HEADERS = ("Week", "Day", "Month")
LESS_THAN_ONE = "<1"
_GEO_SUFFIX = re.compile(r":\s*\([^)]*\)\s*$")


def _term_from_header(cell: str) -> str:
    return _GEO_SUFFIX.sub("", cell).strip()


def _header_line(lines: Sequence[str]) -> Optional[int]:
    for i, line in enumerate(lines):
        if line.split(",", 1)[0].strip().strip('"') in PERIOD_HEADERS:
            return i
    return None


def parse_trends(csv_path: Union[str, Path], term_labels: Optional[Sequence[str]] = None) -> List[TrendsRecord]:
    """
    One record per (period start, term). ``term_labels`` renames the term
    columns in file order. "<1" cells read as 0 and are flagged.
    """
    lines = Path(csv_path).read_text(encoding="utf-8-sig").splitlines()
    header_at = _header_line(lines)
    if header_at is None:
        raise NotATrendsExportError(csv_path, "no Week/Day/Month header row")

    # the preamble above the header row is free text
    try:
        table = pd.read_csv(
            io.StringIO("\n".join(lines[header_at:])),
            header=None,
            dtype=str,
            keep_default_na=False,
        ).fillna("")
    except pd.errors.ParserError as exc:
        raise NotATrendsExportError(csv_path, f"unreadable table: {exc}") from exc
    header = list(table.iloc[0])
    if len(header) < 2:
        raise NotATrendsExportError(csv_path, "header names no search terms")
    terms = [_term_from_header(cell) for cell in header[1:]]
    if term_labels is not None:
        if len(term_labels) != len(terms):
            raise ValueError(f"{len(term_labels)} term label(s) given for {len(terms)} column(s) in {csv_path}")
        terms = list(term_labels)

    records: List[TrendsRecord] = []
    for row_no, row in enumerate(table.iloc[1:].itertuples(index=False, name=None), start=1):
        if not row[0].strip():
            continue
        try:
            day = isoparse(row[0].strip()).date()
        except ValueError as exc:
            raise NotATrendsExportError(csv_path, f"row {row_no}: bad date {row[0]!r}") from exc
        for term, cell in zip(terms, row[1:]):
            cell = cell.strip()
            if not cell:
                continue
            if cell == LESS_THAN_ONE:
                records.append(TrendsRecord(date=day, term=term, interest=0, flags=("less than 1",)))
                continue
            try:
                interest = int(cell)
            except ValueError as exc:
                raise NotATrendsExportError(csv_path, f"row {row_no}: bad interest {cell!r}") from exc
            flags = ()
            if not 0 <= interest <= 100:
                flags = (f"out of range: {interest}",)
                interest = min(max(interest, 0), 100)
            records.append(TrendsRecord(date=day, term=term, interest=interest, flags=flags))

    logger.info("Parsed %d Trends record(s) for %d term(s) from %s", len(records), len(terms), Path(csv_path).name)
    return records
