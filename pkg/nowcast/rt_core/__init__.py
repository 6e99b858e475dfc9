"""
Real-time R_t estimation

Bayesian grid filter over R_t with a Poisson likelihood on daily counts and a
Gaussian random-walk transition.
"""

from .errors import (
    CutoffNotReachedError,
    EmptyInputError,
    EstimationError,
    InsufficientDataError,
    InvalidPoissonArgumentError,
    NoViableSigmaError,
    PosteriorCollapsedError,
)
from .estimator import estimate_rt, optimize_sigma, score_sigmas
from .grid_filter import gamma_prior, gaussian_transition_kernel, posterior_sequence, uniform_prior
from .hdi import highest_density_interval
from .likelihood import expected_rate, likelihood_matrix, log_poisson_pmf
from .models import (
    AUTO,
    CaseSeries,
    EstimatorConfig,
    LikelihoodMatrix,
    PosteriorMatrix,
    RtEstimate,
    RtGrid,
    SerialIntervalParam,
    SmoothedSeries,
)
from .smoothing import smooth_cases, trim_leading

__all__ = [
    'AUTO',
    'CaseSeries',
    'SmoothedSeries',
    'RtGrid',
    'SerialIntervalParam',
    'EstimatorConfig',
    'LikelihoodMatrix',
    'PosteriorMatrix',
    'RtEstimate',
    'smooth_cases',
    'trim_leading',
    'expected_rate',
    'log_poisson_pmf',
    'likelihood_matrix',
    'gaussian_transition_kernel',
    'uniform_prior',
    'gamma_prior',
    'posterior_sequence',
    'highest_density_interval',
    'optimize_sigma',
    'score_sigmas',
    'estimate_rt',
    'EstimationError',
    'EmptyInputError',
    'CutoffNotReachedError',
    'InvalidPoissonArgumentError',
    'PosteriorCollapsedError',
    'NoViableSigmaError',
    'InsufficientDataError',
]
