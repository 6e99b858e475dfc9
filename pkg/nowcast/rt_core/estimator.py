"""
End-to-end R_t estimation: smooth, trim, pick sigma, filter, summarize.
"""

import logging
from typing import Dict, Optional

import numpy as np
import pandas as pd

from .errors import EmptyInputError, InsufficientDataError, NoViableSigmaError, PosteriorCollapsedError
from .grid_filter import gamma_prior, gaussian_transition_kernel, posterior_sequence, uniform_prior
from .hdi import highest_density_interval
from .likelihood import likelihood_matrix
from .models import AUTO, CaseSeries, EstimatorConfig, LikelihoodMatrix, PosteriorMatrix, RtEstimate, SmoothedSeries
from .smoothing import smooth_cases, trim_leading

logger = logging.getLogger(__name__)


def initial_prior_for(config: EstimatorConfig) -> np.ndarray:
    if config.initial_prior == "gamma":
        return gamma_prior(config.grid, config.prior_gamma_shape)
    return uniform_prior(config.grid)


def score_sigmas(log_likelihoods: LikelihoodMatrix, config: EstimatorConfig) -> Dict[float, float]:
    """
    Summed log normalizer for each distinct sigma candidate.

    Candidates whose filter collapses are left out.
    """
    prior = initial_prior_for(config)
    scores: Dict[float, float] = {}
    for sigma in sorted(set(float(s) for s in config.sigma_candidates)):
        kernel = gaussian_transition_kernel(config.grid, sigma)
        try:
            posterior = posterior_sequence(log_likelihoods, kernel, prior)
        except PosteriorCollapsedError as exc:
            logger.debug("sigma=%g discarded: %s", sigma, exc)
            continue
        scores[sigma] = posterior.log_evidence
        logger.debug("sigma=%g log evidence=%.6f", sigma, scores[sigma])
    return scores


def _best_sigma(scores: Dict[float, float], candidates) -> float:
    if not scores:
        raise NoViableSigmaError(candidates)
    best = None
    for sigma in sorted(scores):
        if best is None or scores[sigma] > scores[best]:
            best = sigma
    return best


def optimize_sigma(series: SmoothedSeries, config: EstimatorConfig) -> float:
    """Candidate sigma with the highest marginal likelihood; ties go to the smallest."""
    if not config.sigma_candidates:
        raise NoViableSigmaError(())
    log_likelihoods = likelihood_matrix(series, config.grid, config.serial, config.lambda_floor)
    return _best_sigma(score_sigmas(log_likelihoods, config), config.sigma_candidates)


def summarize_posteriors(
    posterior: PosteriorMatrix,
    sigma: float,
    hdi_mass: float,
    flagged=frozenset(),
) -> RtEstimate:
    r = posterior.grid.values
    modes = r[np.argmax(posterior.rows, axis=1)]
    means = posterior.rows @ r
    bounds = [highest_density_interval(row, r, hdi_mass) for row in posterior.rows]
    frame = pd.DataFrame(
        {
            "rt_mode": modes,
            "rt_mean": means,
            "hdi_low": [low for low, _ in bounds],
            "hdi_high": [high for _, high in bounds],
        },
        index=pd.DatetimeIndex(posterior.dates, name="date"),
    )
    return RtEstimate(frame=frame, sigma=float(sigma), hdi_mass=hdi_mass, flagged=frozenset(flagged))


def prepare_series(series: CaseSeries, config: EstimatorConfig) -> SmoothedSeries:
    if len(series) == 0:
        raise EmptyInputError("case series has no dates")
    if config.use_source_smoothed and series.source_smoothed is not None:
        smoothed = series.source_smoothed
    else:
        if config.use_source_smoothed:
            logger.warning("Source-smoothed values requested but %s has none; smoothing locally", series.source_label)
        smoothed = smooth_cases(series, config.window_days, config.window_std)
    if config.round_smoothed:
        smoothed = SmoothedSeries(
            values=smoothed.values.round(),
            window_days=smoothed.window_days,
            window_std=smoothed.window_std,
        )
    return trim_leading(smoothed, config.leading_trim_cutoff)


def estimate_rt(series: CaseSeries, config: Optional[EstimatorConfig] = None) -> RtEstimate:
    """
    Daily R_t posterior summaries for a case series.

    The first estimated date is the second date of the trimmed series.
    """
    config = config or EstimatorConfig()
    trimmed = prepare_series(series, config)
    if len(trimmed) < 2:
        raise InsufficientDataError(len(trimmed))

    log_likelihoods = likelihood_matrix(trimmed, config.grid, config.serial, config.lambda_floor)
    if config.sigma == AUTO:
        sigma = _best_sigma(score_sigmas(log_likelihoods, config), config.sigma_candidates)
        logger.info("Selected sigma=%g for %s", sigma, series.source_label or "series")
    else:
        sigma = float(config.sigma)

    kernel = gaussian_transition_kernel(config.grid, sigma)
    posterior = posterior_sequence(log_likelihoods, kernel, initial_prior_for(config))
    return summarize_posteriors(posterior, sigma, config.hdi_mass, log_likelihoods.flagged)
