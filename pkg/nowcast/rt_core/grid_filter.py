"""
Recursive Bayesian update of P(R_t | k) on a fixed grid.

prior_t = posterior_{t-1} @ K, with K the row-stochastic Gaussian random-walk
kernel; posterior_t is proportional to exp(loglik_t) * prior_t. All products
are taken in log space with the row maximum subtracted before exponentiation.
"""

import logging

import numpy as np
from scipy import stats as sps

from .errors import EstimationError, PosteriorCollapsedError
from .models import LikelihoodMatrix, PosteriorMatrix, RtGrid

logger = logging.getLogger(__name__)

# Posterior entries below this fraction of the row maximum contribute
# nothing measurable to the next prior and are left out of the propagation.
_SUPPORT_TOL = 1e-18


def gaussian_transition_kernel(grid: RtGrid, sigma: float) -> np.ndarray:
    """Entry (i, j) proportional to exp(-(r_j - r_i)^2 / (2 sigma^2)); rows sum to 1."""
    if not sigma > 0:
        raise EstimationError(f"sigma must be > 0, got {sigma}")
    r = grid.values
    kernel = np.exp(-0.5 * ((r[None, :] - r[:, None]) / sigma) ** 2)
    kernel /= kernel.sum(axis=1, keepdims=True)
    return kernel


def uniform_prior(grid: RtGrid) -> np.ndarray:
    return np.full(grid.n_points, 1.0 / grid.n_points)


def gamma_prior(grid: RtGrid, shape: float = 4.0) -> np.ndarray:
    """Wide Gamma(shape, scale=1) density, normalized over the grid points."""
    prior = sps.gamma(a=shape).pdf(grid.values)
    return prior / prior.sum()


def kernel_bands(kernel: np.ndarray):
    """First and last nonzero column of every kernel row."""
    nonzero = kernel != 0
    first = nonzero.argmax(axis=1)
    last = kernel.shape[1] - 1 - nonzero[:, ::-1].argmax(axis=1)
    return first, last


def _propagate(posterior: np.ndarray, kernel: np.ndarray, bands) -> np.ndarray:
    support = np.flatnonzero(posterior > posterior.max() * _SUPPORT_TOL)
    lo, hi = support[0], support[-1] + 1
    first, last = bands
    col_lo, col_hi = first[lo:hi].min(), last[lo:hi].max() + 1
    prior = np.zeros(kernel.shape[1])
    # both slices are views into the kernel
    prior[col_lo:col_hi] = posterior[lo:hi] @ kernel[lo:hi, col_lo:col_hi]
    return prior


def posterior_sequence(
    log_likelihoods: LikelihoodMatrix,
    kernel: np.ndarray,
    initial_prior: np.ndarray,
) -> PosteriorMatrix:
    """
    Run the filter over every likelihood row.

    Also returns, per date, log P(k_t | k_1..k_{t-1}), which summed over the
    dates is the marginal likelihood used to pick sigma.
    """
    rows = np.asarray(log_likelihoods.rows, dtype=float)
    n_dates, n_points = rows.shape
    if kernel.shape != (n_points, n_points):
        raise EstimationError(f"kernel shape {kernel.shape} does not match grid of {n_points} points")
    if initial_prior.shape != (n_points,):
        raise EstimationError(f"initial prior has {initial_prior.shape[0]} points, grid has {n_points}")
    if abs(initial_prior.sum() - 1.0) > 1e-9:
        raise EstimationError(f"initial prior sums to {initial_prior.sum()}, expected 1")

    posteriors = np.empty_like(rows)
    log_normalizers = np.empty(n_dates)
    prior = initial_prior
    bands = kernel_bands(kernel)

    with np.errstate(divide="ignore"):
        for t in range(n_dates):
            if t:
                prior = _propagate(posteriors[t - 1], kernel, bands)
            log_joint = rows[t] + np.log(prior)
            peak = log_joint.max()
            if not np.isfinite(peak):
                raise PosteriorCollapsedError(log_likelihoods.dates[t].date())
            weights = np.exp(log_joint - peak)
            total = weights.sum()
            posteriors[t] = weights / total
            log_normalizers[t] = peak + np.log(total)

    return PosteriorMatrix(
        dates=log_likelihoods.dates,
        grid=log_likelihoods.grid,
        rows=posteriors,
        log_normalizers=log_normalizers,
    )
