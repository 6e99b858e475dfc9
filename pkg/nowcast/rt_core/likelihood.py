"""
Poisson likelihood of daily counts as a function of R_t.

lambda = k_{t-1} * exp(gamma * (R_t - 1)); P(k | lambda) is Poisson, extended
to real-valued k through lnGamma(k + 1) so smoothed counts can be scored.
"""

import logging

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import EstimationError, InvalidPoissonArgumentError
from .models import LikelihoodMatrix, RtGrid, SerialIntervalParam, SmoothedSeries

logger = logging.getLogger(__name__)


def expected_rate(k_prev, gamma, r):
    """k_prev * exp(gamma * (r - 1)); broadcasts over numpy arrays."""
    return k_prev * np.exp(gamma * (np.asarray(r, dtype=float) - 1.0))


def log_poisson_pmf(k, lam):
    """
    ln(lam^k e^-lam / k!) with lnGamma(k + 1) in place of ln k!.

    lam = 0 gives 0 for k = 0 and -inf otherwise.
    """
    k_arr = np.asarray(k, dtype=float)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(k_arr < 0) or np.any(np.isnan(k_arr)):
        raise InvalidPoissonArgumentError(f"k must be >= 0, got {k}")
    if np.any(lam_arr < 0) or np.any(np.isnan(lam_arr)):
        raise InvalidPoissonArgumentError(f"lambda must be >= 0, got {lam}")

    with np.errstate(divide="ignore"):
        out = xlogy(k_arr, lam_arr) - lam_arr - gammaln(k_arr + 1.0)
    if np.ndim(out) == 0:
        return float(out)
    return out


def likelihood_matrix(
    series: SmoothedSeries,
    grid: RtGrid,
    serial: SerialIntervalParam,
    lambda_floor: float = 1e-8,
) -> LikelihoodMatrix:
    """
    Log-likelihood rows for every day after the first.

    A day that follows a zero-count day with cases of its own would score
    -inf everywhere; lambda is floored at ``lambda_floor`` for it instead and
    the date is flagged.
    """
    if len(series) < 2:
        raise EstimationError(f"likelihood needs at least 2 dates, got {len(series)}")

    k = series.values.to_numpy(dtype=float)
    k_prev = k[:-1, None]
    k_now = k[1:, None]
    lam = expected_rate(k_prev, serial.gamma, grid.values[None, :])

    jumps = (k_prev[:, 0] == 0) & (k_now[:, 0] > 0)
    flagged = frozenset()
    if jumps.any():
        lam[jumps] = np.maximum(lam[jumps], lambda_floor)
        flagged = frozenset(series.dates[1:][jumps])
        logger.warning(
            "Floored lambda at %g on %d day(s) following a zero count: %s",
            lambda_floor,
            len(flagged),
            ", ".join(d.date().isoformat() for d in sorted(flagged)),
        )

    rows = log_poisson_pmf(np.broadcast_to(k_now, lam.shape), lam)
    return LikelihoodMatrix(dates=series.dates[1:], grid=grid, rows=np.atleast_2d(rows), flagged=flagged)
