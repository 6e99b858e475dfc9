"""
Domain types for the R_t grid filter.

Series are pandas objects on a daily DatetimeIndex; grids and posteriors are
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Dict, FrozenSet, Optional, Tuple, Union

import numpy as np
import pandas as pd

AUTO = "auto"

DEFAULT_SIGMA_CANDIDATES: Tuple[float, ...] = (0.01, 0.03, 0.05, 0.1, 0.15, 0.25, 0.5, 1.0)


def _daily_index(index: pd.Index) -> pd.DatetimeIndex:
    idx = pd.DatetimeIndex(index)
    if len(idx) > 1:
        steps = np.diff(idx.asi8)
        if not np.all(steps == pd.Timedelta(days=1).value):
            raise ValueError("dates must be strictly increasing, one entry per day")
    return idx


@dataclass(frozen=True)
class RtGrid:
    r_min: float = 0.0
    r_max: float = 12.0
    n_points: int = 1201

    def __post_init__(self):
        if self.r_min < 0:
            raise ValueError(f"r_min must be >= 0, got {self.r_min}")
        if not self.r_max > self.r_min:
            raise ValueError(f"r_max must exceed r_min ({self.r_max} <= {self.r_min})")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_points)

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)


@dataclass(frozen=True)
class SerialIntervalParam:
    serial_interval_days: float = 7.0

    def __post_init__(self):
        if not self.serial_interval_days > 0:
            raise ValueError(f"serial interval must be > 0, got {self.serial_interval_days}")

    @property
    def gamma(self) -> float:
        return 1.0 / self.serial_interval_days


@dataclass
class SmoothedSeries:
    values: pd.Series
    window_days: int = 0
    window_std: float = 0.0

    def __post_init__(self):
        self.values = pd.Series(
            np.asarray(self.values, dtype=float),
            index=_daily_index(self.values.index),
            name=self.values.name,
        )
        if len(self.values) and (not np.all(np.isfinite(self.values.values)) or (self.values.values < 0).any()):
            raise ValueError("smoothed values must be finite and >= 0")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.values.index


@dataclass
class CaseSeries:
    """
    Daily new-case counts for one place.

    ``counts`` holds the integer k_t. ``flags`` maps a date to the reason its
    count was modified at ingestion (filled, missing, clamped). ``expected``
    carries unrounded values for deterministic simulations; ``source_smoothed``
    is the publisher's own smoothed column when one was ingested.
    """

    counts: pd.Series
    source_label: str = ""
    location: Optional[str] = None
    flags: Dict[date, str] = field(default_factory=dict)
    clamp_audit: Dict[str, float] = field(default_factory=dict)
    expected: Optional[pd.Series] = None
    source_smoothed: Optional[SmoothedSeries] = None

    def __post_init__(self):
        counts = pd.Series(self.counts)
        self.counts = pd.Series(
            counts.to_numpy(dtype=np.int64),
            index=_daily_index(counts.index),
            name="new_cases",
        )
        if (self.counts.values < 0).any():
            raise ValueError("case counts must be >= 0")

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.counts.index


@dataclass(frozen=True)
class EstimatorConfig:
    grid: RtGrid = field(default_factory=RtGrid)
    serial: SerialIntervalParam = field(default_factory=SerialIntervalParam)
    sigma: Union[float, str] = AUTO
    sigma_candidates: Tuple[float, ...] = DEFAULT_SIGMA_CANDIDATES
    window_days: int = 7
    window_std: float = 2.0
    leading_trim_cutoff: float = 10.0
    hdi_mass: float = 0.9
    use_source_smoothed: bool = False
    initial_prior: str = "uniform"
    prior_gamma_shape: float = 4.0
    lambda_floor: float = 1e-8
    round_smoothed: bool = False

    def __post_init__(self):
        if self.sigma == AUTO:
            if not self.sigma_candidates or any(not s > 0 for s in self.sigma_candidates):
                raise ValueError("sigma_candidates must be non-empty and strictly positive")
        elif not (isinstance(self.sigma, (int, float)) and self.sigma > 0):
            raise ValueError(f"sigma must be > 0 or {AUTO!r}, got {self.sigma!r}")
        if not 0 < self.hdi_mass < 1:
            raise ValueError(f"hdi_mass must be in (0, 1), got {self.hdi_mass}")
        if self.leading_trim_cutoff < 0:
            raise ValueError("leading_trim_cutoff must be >= 0")
        if self.initial_prior not in ("uniform", "gamma"):
            raise ValueError(f"unknown initial_prior {self.initial_prior!r}")

    def to_dict(self) -> Dict[str, object]:
        return {
            "grid": {"r_min": self.grid.r_min, "r_max": self.grid.r_max, "n_points": self.grid.n_points},
            "serial_interval_days": self.serial.serial_interval_days,
            "sigma": self.sigma,
            "sigma_candidates": list(self.sigma_candidates),
            "window_days": self.window_days,
            "window_std": self.window_std,
            "leading_trim_cutoff": self.leading_trim_cutoff,
            "hdi_mass": self.hdi_mass,
            "use_source_smoothed": self.use_source_smoothed,
            "initial_prior": self.initial_prior,
            "prior_gamma_shape": self.prior_gamma_shape,
            "lambda_floor": self.lambda_floor,
            "round_smoothed": self.round_smoothed,
        }


@dataclass
class LikelihoodMatrix:
    """Per-date log-likelihood rows over the grid; row t pairs (k_{t-1}, k_t)."""

    dates: pd.DatetimeIndex
    grid: RtGrid
    rows: np.ndarray
    flagged: FrozenSet[pd.Timestamp] = frozenset()


@dataclass
class PosteriorMatrix:
    dates: pd.DatetimeIndex
    grid: RtGrid
    rows: np.ndarray
    log_normalizers: np.ndarray

    @property
    def log_evidence(self) -> float:
        return float(np.sum(self.log_normalizers))


ESTIMATE_COLUMNS = ("rt_mode", "rt_mean", "hdi_low", "hdi_high")


@dataclass
class RtEstimate:
    """Per-date R_t summaries indexed by date, plus the sigma and HDI mass used."""

    frame: pd.DataFrame
    sigma: float
    hdi_mass: float
    flagged: FrozenSet[pd.Timestamp] = frozenset()

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.frame.index

    def to_frame(self) -> pd.DataFrame:
        out = self.frame.loc[:, list(ESTIMATE_COLUMNS)].copy()
        out["sigma"] = float(self.sigma)
        out["flagged"] = [1 if d in self.flagged else 0 for d in out.index]
        out.index.name = "date"
        return out
