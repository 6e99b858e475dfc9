"""
Synthetic case series from known R_t paths, used as ground truth for the estimator.
"""

from .models import DETERMINISTIC_MEAN, STOCHASTIC, RtTrajectory, SimConfig
from .poisson import PoissonSampler
from .scenarios import (
    SCENARIO_NAMES,
    constant_trajectory,
    get_scenario,
    random_walk_trajectory,
    read_trajectory,
    standard_scenarios,
    step_trajectory,
)
from .simulator import simulate_cases

__all__ = [
    'RtTrajectory',
    'SimConfig',
    'STOCHASTIC',
    'DETERMINISTIC_MEAN',
    'PoissonSampler',
    'simulate_cases',
    'standard_scenarios',
    'get_scenario',
    'SCENARIO_NAMES',
    'constant_trajectory',
    'step_trajectory',
    'random_walk_trajectory',
    'read_trajectory',
]
