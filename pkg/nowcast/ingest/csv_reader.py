"""
Shared streaming CSV access for the parsers.

Every cell is read as text with blanks kept as "" so each parser decides
what missing means; unknown extra columns pass through untouched. Files are
read from disk in row chunks and never loaded whole.
"""

import io
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Union

import pandas as pd

from .errors import SchemaDriftError
from .models import Snapshot

CHUNK_ROWS = 100_000

CsvSource = Union[Snapshot, str, Path, bytes]
ResolvedSource = Union[Path, bytes]


def resolve_source(source: CsvSource) -> ResolvedSource:
    """A snapshot is digest-checked and replaced by its path; in-memory bytes stay as they are."""
    if isinstance(source, Snapshot):
        return source.verify()
    if isinstance(source, bytes):
        return source
    return Path(source)


def _reader_input(source: ResolvedSource):
    return io.BytesIO(source) if isinstance(source, bytes) else source


def iter_chunks(source: ResolvedSource, usecols=None) -> Iterator[pd.DataFrame]:
    reader = pd.read_csv(
        _reader_input(source),
        dtype=str,
        keep_default_na=False,
        encoding="utf-8-sig",
        chunksize=CHUNK_ROWS,
        usecols=usecols,
    )
    with reader:
        for chunk in reader:
            yield chunk


def read_header(source: ResolvedSource) -> List[str]:
    try:
        header = pd.read_csv(_reader_input(source), dtype=str, nrows=0, encoding="utf-8-sig")
    except pd.errors.EmptyDataError:
        return []
    return list(header.columns)


def pick_column(columns: Sequence[str], aliases: Iterable[str]) -> Optional[str]:
    present = set(columns)
    for alias in aliases:
        if alias in present:
            return alias
    return None


def require_column(columns: Sequence[str], aliases: Sequence[str], source: str) -> str:
    column = pick_column(columns, aliases)
    if column is None:
        raise SchemaDriftError(aliases[0], source)
    return column


def parse_float(cell: str) -> Optional[float]:
    cell = (cell or "").strip()
    if not cell:
        return None
    return float(cell)


def normalize_name(name: str) -> str:
    return " ".join((name or "").split()).casefold()
