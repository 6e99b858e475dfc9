"""
Tabular outputs: the estimate CSV and the joined daily table (CSV + JSON lines).

All writers are byte-deterministic: ISO dates, '.' decimals, LF endings,
fixed float formatting.
"""

import json
import logging
import math
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from nowcast.rt_core.models import ESTIMATE_COLUMNS, RtEstimate

from .errors import ReportError, ReportWriteError

logger = logging.getLogger(__name__)

ESTIMATE_CSV_COLUMNS = ("date",) + ESTIMATE_COLUMNS + ("sigma", "flagged")


def _write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc
    return path


def emit_estimates(est: RtEstimate, path: Union[str, Path]) -> Path:
    """Write date, rt_mode, rt_mean, hdi_low, hdi_high, sigma, flagged."""
    if est is None or len(est) == 0:
        raise ReportError("refusing to write an empty estimate")
    frame = est.to_frame()
    frame.index = frame.index.strftime("%Y-%m-%d")
    frame.index.name = "date"
    text = frame.to_csv(lineterminator="\n", float_format="%.6f")
    path = _write_text(Path(path), text)
    logger.info("Wrote %d estimate row(s) to %s", len(frame), path)
    return path


def read_estimates(path: Union[str, Path]) -> RtEstimate:
    frame = pd.read_csv(path, dtype={"date": str})
    missing = [c for c in ESTIMATE_CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ReportError(f"{path} is not an estimate file (missing {', '.join(missing)})")
    frame.index = pd.DatetimeIndex(pd.to_datetime(frame.pop("date"), format="ISO8601"), name="date")
    flagged = frozenset(frame.index[frame["flagged"].astype(int) == 1])
    sigma = float(frame["sigma"].iloc[0]) if len(frame) else float("nan")
    return RtEstimate(frame=frame.loc[:, list(ESTIMATE_COLUMNS)], sigma=sigma, hdi_mass=float("nan"), flagged=flagged)


def _json_value(value):
    if value is None:
        return None
    if isinstance(value, float) and math.isnan(value):
        return None
    if hasattr(value, "item"):
        value = value.item()
        if isinstance(value, float) and math.isnan(value):
            return None
    return value


def emit_joined(table: pd.DataFrame, csv_path: Union[str, Path], jsonl_path: Optional[Union[str, Path]] = None):
    """Joined table as CSV (empty cell for missing) and optionally as JSON lines (null for missing)."""
    out = table.copy()
    out.index = pd.DatetimeIndex(out.index).strftime("%Y-%m-%d")
    out.index.name = "date"
    written = [_write_text(Path(csv_path), out.to_csv(lineterminator="\n", float_format="%.10g", na_rep=""))]

    if jsonl_path is not None:
        lines = []
        for day, row in out.iterrows():
            record = {"date": day}
            record.update({column: _json_value(row[column]) for column in out.columns})
            lines.append(json.dumps(record, allow_nan=False))
        written.append(_write_text(Path(jsonl_path), "".join(line + "\n" for line in lines)))

    logger.info("Wrote joined table (%d rows) to %s", len(out), ", ".join(str(p) for p in written))
    return written
