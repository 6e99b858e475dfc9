"""
Date-aligned table of cases, R_t, policy, mobility and search interest.
"""

from typing import List, Optional

import pandas as pd

from nowcast.rt_core.models import ESTIMATE_COLUMNS, CaseSeries, RtEstimate

from .mobility import mobility_frame
from .models import INDICATOR_RANGES, MobilityRecord, PolicyRecord, TrendsRecord

TREND_PREFIX = "trend:"


def policy_frame(records: List[PolicyRecord]) -> pd.DataFrame:
    columns = ["stringency_index"] + list(INDICATOR_RANGES)
    rows = [[r.stringency_index] + [r.indicators.get(code) for code in INDICATOR_RANGES] for r in records]
    frame = pd.DataFrame(rows, columns=columns, dtype=float, index=pd.DatetimeIndex([pd.Timestamp(r.date) for r in records], name="date"))
    return frame.dropna(axis=1, how="all") if len(frame) else frame


def join_trends(records: List[TrendsRecord]) -> pd.DataFrame:
    """One ``trend:<term>`` column per term, indexed by period start."""
    if not records:
        return pd.DataFrame(index=pd.DatetimeIndex([], name="date"))
    long = pd.DataFrame(
        {
            "date": [pd.Timestamp(r.date) for r in records],
            "term": [TREND_PREFIX + r.term for r in records],
            "interest": [float(r.interest) for r in records],
        }
    )
    wide = long.pivot_table(index="date", columns="term", values="interest", aggfunc="last")
    wide.columns.name = None
    return wide.sort_index(axis=1)


def join_daily(
    case: Optional[CaseSeries],
    rt: Optional[RtEstimate],
    policy: Optional[List[PolicyRecord]],
    mobility: Optional[List[MobilityRecord]],
    *,
    mobility_raw: Optional[List[MobilityRecord]] = None,
    trends: Optional[List[TrendsRecord]] = None,
) -> pd.DataFrame:
    """
    Outer join on date; one row per date present in any input, sorted.

    Absent cells are NaN. Raw mobility, when given, lands in ``<category>_raw``.
    """
    parts = []
    if case is not None and len(case):
        cases = pd.DataFrame({"new_cases": case.counts.astype(float)})
        if case.source_smoothed is not None:
            cases["new_cases_smoothed"] = case.source_smoothed.values
        parts.append(cases)
    if rt is not None and len(rt):
        parts.append(rt.frame.loc[:, list(ESTIMATE_COLUMNS)])
    if policy:
        parts.append(policy_frame(policy))
    if mobility:
        parts.append(mobility_frame(mobility))
    if mobility_raw:
        parts.append(mobility_frame(mobility_raw).add_suffix("_raw"))
    if trends:
        parts.append(join_trends(trends))

    if not parts:
        return pd.DataFrame(index=pd.DatetimeIndex([], name="date"))

    for part in parts:
        part.index = pd.DatetimeIndex(part.index).normalize()
        part.index.name = "date"
    table = pd.concat(parts, axis=1, join="outer", sort=True)
    table.index.name = "date"
    return table
