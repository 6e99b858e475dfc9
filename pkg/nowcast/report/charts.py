"""
Static SVG overlay charts.

Lines on the left axis, step series (indices and ordinal policy levels) on
the right axis, an optional shaded band between two columns, ISO date ticks.
Missing values break the lines. Output is byte-stable for identical input:
a fixed hash salt drives element ids and no timestamp is embedded.
"""

import fnmatch
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import numpy as np
import pandas as pd
from matplotlib import dates as mdates
from matplotlib.figure import Figure

from .errors import ReportWriteError, UnknownColumnError

logger = logging.getLogger(__name__)

SVG_RC = {
    "svg.hashsalt": "rtwatch",
    "svg.fonttype": "none",
    "path.simplify": False,
    "axes.spines.top": False,
}
SVG_METADATA = {"Date": None, "Creator": "rtwatch"}
FIGSIZE = (10.0, 5.0)


@dataclass(frozen=True)
class ChartSpec:
    name: str
    title: str = ""
    left: Tuple[str, ...] = ()
    right: Tuple[str, ...] = ()
    band: Optional[Tuple[str, str]] = None
    band_label: str = "credible interval"
    left_label: str = ""
    right_label: str = ""
    right_limits: Optional[Tuple[float, float]] = None
    reference_line: Optional[float] = None
    labels: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_dict(cls, name: str, data: Dict) -> "ChartSpec":
        known = {"title", "left", "right", "band", "band_label", "left_label", "right_label", "right_limits", "reference_line", "labels"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"chart preset {name!r}: unknown key(s) {', '.join(sorted(unknown))}")
        band = data.get("band")
        if band is not None and len(band) != 2:
            raise ValueError(f"chart preset {name!r}: band needs exactly two columns")
        limits = data.get("right_limits")
        return cls(
            name=name,
            title=data.get("title", ""),
            left=tuple(data.get("left", ())),
            right=tuple(data.get("right", ())),
            band=tuple(band) if band else None,
            band_label=data.get("band_label", "credible interval"),
            left_label=data.get("left_label", ""),
            right_label=data.get("right_label", ""),
            right_limits=tuple(float(v) for v in limits) if limits else None,
            reference_line=data.get("reference_line"),
            labels=dict(data.get("labels", {})),
        )

    def columns(self) -> List[str]:
        cols = list(self.left) + list(self.right)
        if self.band:
            cols.extend(self.band)
        return cols


def _resolve(columns: Sequence[str], wanted: Sequence[str], chart: str) -> List[str]:
    resolved: List[str] = []
    for name in wanted:
        if any(ch in name for ch in "*?["):
            hits = sorted(c for c in columns if fnmatch.fnmatchcase(c, name))
            if not hits:
                raise UnknownColumnError(name, chart)
            resolved.extend(h for h in hits if h not in resolved)
        elif name in columns:
            resolved.append(name)
        else:
            raise UnknownColumnError(name, chart)
    return resolved


def missing_columns(table: pd.DataFrame, spec: ChartSpec) -> List[str]:
    missing = []
    for name in spec.columns():
        try:
            _resolve(list(table.columns), [name], spec.name)
        except UnknownColumnError:
            missing.append(name)
    return missing


def _label(spec: ChartSpec, column: str) -> str:
    return spec.labels.get(column, column.replace("trend:", "").replace("_", " "))


def chart_overlay(table: pd.DataFrame, spec: ChartSpec) -> str:
    """Render ``spec`` over ``table`` (date-indexed) and return the SVG text."""
    empty = table is None or table.empty
    if not empty:
        columns = list(table.columns)
        left = _resolve(columns, spec.left, spec.name)
        right = _resolve(columns, spec.right, spec.name)
        band = _resolve(columns, spec.band, spec.name) if spec.band else None
    else:
        left, right, band = [], [], None

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=FIGSIZE)
        ax = fig.add_subplot(1, 1, 1)
        ax.set_title(spec.title or spec.name)
        ax.set_ylabel(spec.left_label)
        ax_right = ax.twinx() if spec.right else None
        if ax_right is not None:
            ax_right.set_ylabel(spec.right_label)
            if spec.right_limits:
                ax_right.set_ylim(*spec.right_limits)

        if empty:
            ax.text(0.5, 0.5, "no data", transform=ax.transAxes, ha="center", va="center")
            ax.set_xticks([])
        else:
            x = pd.DatetimeIndex(table.index).to_pydatetime()
            if band:
                low = table[band[0]].to_numpy(dtype=float)
                high = table[band[1]].to_numpy(dtype=float)
                present = np.isfinite(low) & np.isfinite(high)
                ax.fill_between(x, low, high, where=present, interpolate=False, alpha=0.2, lw=0, label=spec.band_label)
            for column in left:
                ax.plot(x, table[column].to_numpy(dtype=float), lw=1.5, label=_label(spec, column))
            if spec.reference_line is not None:
                ax.axhline(spec.reference_line, ls="--", lw=0.8, color="0.5")
            for column in right:
                ax_right.step(x, table[column].to_numpy(dtype=float), where="post", lw=1.2, ls="-", label=_label(spec, column))
            locator = mdates.AutoDateLocator()
            ax.xaxis.set_major_locator(locator)
            ax.xaxis.set_major_formatter(mdates.DateFormatter("%Y-%m-%d"))
            ax.tick_params(axis="x", labelrotation=30)

        handles, labels = ax.get_legend_handles_labels()
        if ax_right is not None:
            more_handles, more_labels = ax_right.get_legend_handles_labels()
            handles += more_handles
            labels += more_labels
        if handles:
            ax.legend(handles, labels, loc="upper left", fontsize="small", frameon=False)

        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata=SVG_METADATA)
    return buf.getvalue()


def render_chart(table: pd.DataFrame, spec: ChartSpec, path: Union[str, Path]) -> Path:
    svg = chart_overlay(table, spec)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(svg)
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc
    logger.info("Wrote chart %s to %s", spec.name, path)
    return path
