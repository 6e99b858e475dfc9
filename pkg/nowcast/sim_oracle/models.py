from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from nowcast.rt_core.models import SerialIntervalParam

STOCHASTIC = "stochastic"
DETERMINISTIC_MEAN = "deterministic-mean"
MODES = (STOCHASTIC, DETERMINISTIC_MEAN)


@dataclass
class RtTrajectory:
    """Known daily R_t path; day 1 is the first entry."""

    true_r: pd.Series
    label: str = ""

    def __post_init__(self):
        values = pd.Series(self.true_r)
        idx = pd.DatetimeIndex(values.index)
        if len(idx) > 1 and not np.all(np.diff(idx.asi8) == pd.Timedelta(days=1).value):
            raise ValueError("trajectory dates must be contiguous daily")
        arr = values.to_numpy(dtype=float)
        if not np.all(np.isfinite(arr)) or (arr < 0).any():
            raise ValueError("true_r must be finite and >= 0")
        self.true_r = pd.Series(arr, index=idx, name="true_r")

    def __len__(self) -> int:
        return len(self.true_r)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.true_r.index


@dataclass(frozen=True)
class SimConfig:
    k0: float = 100.0
    serial: SerialIntervalParam = field(default_factory=SerialIntervalParam)
    seed: int = 0
    mode: str = STOCHASTIC

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError(f"k0 must be > 0, got {self.k0}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def to_dict(self):
        return {
            "k0": self.k0,
            "serial_interval_days": self.serial.serial_interval_days,
            "seed": int(self.seed),
            "mode": self.mode,
        }
