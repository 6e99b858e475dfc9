"""
Fixed validation scenarios for the estimator.
"""

from dataclasses import replace
from datetime import date
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from .models import STOCHASTIC, RtTrajectory, SimConfig

SCENARIO_START = date(2020, 3, 1)
SCENARIO_DAYS = 120
RANDOM_WALK_DAYS = 60


def _dates(days: int, start: date = SCENARIO_START) -> pd.DatetimeIndex:
    return pd.date_range(start, periods=days, freq="D")


def constant_trajectory(r: float, days: int = SCENARIO_DAYS, label: str = "") -> RtTrajectory:
    return RtTrajectory(pd.Series(np.full(days, float(r)), index=_dates(days)), label=label or f"constant-{r:g}")


def step_trajectory(before: float, after: float, change_day: int, days: int = SCENARIO_DAYS, label: str = "step") -> RtTrajectory:
    """R = ``before`` on days 1..change_day-1 and ``after`` from ``change_day`` on."""
    r = np.where(np.arange(1, days + 1) < change_day, float(before), float(after))
    return RtTrajectory(pd.Series(r, index=_dates(days)), label=label)


def random_walk_trajectory(
    seed: int,
    days: int = RANDOM_WALK_DAYS,
    step_std: float = 0.15,
    start_r: float = 1.0,
    bounds: Tuple[float, float] = (0.0, 6.0),
    label: str = "random-walk",
) -> RtTrajectory:
    """Gaussian random walk clipped to ``bounds`` after every step."""
    rng = np.random.Generator(np.random.Philox(int(seed)))
    r = np.empty(days)
    r[0] = start_r
    for t in range(1, days):
        r[t] = min(max(r[t - 1] + step_std * rng.standard_normal(), bounds[0]), bounds[1])
    return RtTrajectory(pd.Series(r, index=_dates(days)), label=label)


def standard_scenarios(seed: int = 0) -> List[Tuple[RtTrajectory, SimConfig]]:
    """
    (a) constant R=1.5; (b) step 2.0 -> 0.8 at day 60; (c) random walk with
    step-std 0.15 clipped to [0, 6]; (d) R=0.5 from 20 cases, which dies out.
    """
    return [
        (constant_trajectory(1.5, label="constant-1.5"), SimConfig(k0=500, seed=seed, mode=STOCHASTIC)),
        (step_trajectory(2.0, 0.8, change_day=60), SimConfig(k0=100, seed=seed, mode=STOCHASTIC)),
        (random_walk_trajectory(seed), SimConfig(k0=200, seed=seed, mode=STOCHASTIC)),
        (constant_trajectory(0.5, label="extinction"), SimConfig(k0=20, seed=seed, mode=STOCHASTIC)),
    ]


def scenarios_by_name(seed: int = 0) -> Dict[str, Tuple[RtTrajectory, SimConfig]]:
    return {traj.label: (traj, cfg) for traj, cfg in standard_scenarios(seed)}


SCENARIO_NAMES = tuple(scenarios_by_name())


def get_scenario(name: str, seed: int = 0) -> Tuple[RtTrajectory, SimConfig]:
    scenarios = scenarios_by_name(seed)
    if name not in scenarios:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")
    traj, cfg = scenarios[name]
    return traj, replace(cfg, seed=seed)


def read_trajectory(path: Union[str, Path]) -> RtTrajectory:
    """Trajectory CSV with columns date,true_r."""
    frame = pd.read_csv(path)
    missing = {"date", "true_r"} - set(frame.columns)
    if missing:
        raise ValueError(f"trajectory file {path} lacks column(s): {', '.join(sorted(missing))}")
    series = pd.Series(frame["true_r"].to_numpy(dtype=float), index=pd.to_datetime(frame["date"]))
    return RtTrajectory(series, label=Path(path).stem)
