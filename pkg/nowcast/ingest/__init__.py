"""
Alternative-data ingestion

Snapshot cache for the upstream CSVs, one parser per source, and the daily
join that lines them up with R_t.
"""

from .case_csv import read_case_series, write_case_series
from .errors import (
    CorruptSnapshotError,
    CountryNotFoundError,
    IngestError,
    MissingSnapshotError,
    NotATrendsExportError,
    SchemaDriftError,
    SourceUnavailableError,
)
from .join import join_daily, join_trends
from .mobility import moving_average, parse_mobility
from .models import MOBILITY_CATEGORIES, MobilityRecord, PolicyRecord, Snapshot, TrendsRecord
from .owid import parse_owid
from .oxcgrt import find_stringency_variant, parse_oxcgrt
from .snapshot_cache import SOURCES, SnapshotCache, fetch_source
from .trends import parse_trends

__all__ = [
    'SOURCES',
    'Snapshot',
    'SnapshotCache',
    'fetch_source',
    'PolicyRecord',
    'MobilityRecord',
    'TrendsRecord',
    'MOBILITY_CATEGORIES',
    'parse_owid',
    'parse_oxcgrt',
    'find_stringency_variant',
    'parse_mobility',
    'moving_average',
    'parse_trends',
    'join_daily',
    'join_trends',
    'read_case_series',
    'write_case_series',
    'IngestError',
    'SourceUnavailableError',
    'CorruptSnapshotError',
    'MissingSnapshotError',
    'CountryNotFoundError',
    'SchemaDriftError',
    'NotATrendsExportError',
]
