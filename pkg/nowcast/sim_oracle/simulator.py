"""
Branching-process case generator.

k_0 = round(k0); for t >= 1, lambda_t = k_{t-1} * exp(gamma * (R_t - 1)).
Stochastic runs draw k_t ~ Poisson(lambda_t); zero is absorbing.
Deterministic-mean runs carry lambda_t forward unrounded.
"""

import logging

import numpy as np
import pandas as pd

from nowcast.rt_core.likelihood import expected_rate
from nowcast.rt_core.models import CaseSeries

from .models import DETERMINISTIC_MEAN, RtTrajectory, SimConfig
from .poisson import PoissonSampler

logger = logging.getLogger(__name__)

_INT64_MAX = float(np.iinfo(np.int64).max)


def simulate_cases(traj: RtTrajectory, config: SimConfig) -> CaseSeries:
    if len(traj) == 0:
        raise ValueError("trajectory is empty")

    gamma = config.serial.gamma
    r = traj.true_r.to_numpy()
    values = np.empty(len(r))
    values[0] = float(round(config.k0))

    if config.mode == DETERMINISTIC_MEAN:
        for t in range(1, len(r)):
            values[t] = expected_rate(values[t - 1], gamma, r[t])
        expected = pd.Series(values, index=traj.dates, name="expected_cases")
    else:
        sampler = PoissonSampler(config.seed)
        for t in range(1, len(r)):
            if values[t - 1] == 0:
                values[t:] = 0
                logger.debug("%s went extinct on day %d", traj.label or "trajectory", t)
                break
            values[t] = sampler.draw(float(expected_rate(values[t - 1], gamma, r[t])))
        expected = None

    if values.max() >= _INT64_MAX:
        raise ValueError(f"simulated counts for {traj.label or 'trajectory'} overflow int64")

    counts = pd.Series(np.rint(values).astype(np.int64), index=traj.dates)
    return CaseSeries(
        counts=counts,
        source_label=f"sim:{traj.label}" if traj.label else "sim",
        expected=expected,
    )
