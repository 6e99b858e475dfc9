import numpy as np
import pandas as pd
import pytest
from scipy import stats as sps

from nowcast.rt_core import (
    LikelihoodMatrix,
    PosteriorCollapsedError,
    RtGrid,
    SerialIntervalParam,
    SmoothedSeries,
    gamma_prior,
    gaussian_transition_kernel,
    likelihood_matrix,
    posterior_sequence,
    uniform_prior,
)
from nowcast.rt_core.errors import EstimationError
from nowcast.rt_core.grid_filter import _propagate, kernel_bands


def brute_force_filter(counts, grid_values, sigma, gamma=1 / 7):
    """Dense linear-space reference: explicit kernel loops and Poisson pmfs."""
    n = grid_values.size
    kernel = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            kernel[i, j] = np.exp(-0.5 * ((grid_values[j] - grid_values[i]) / sigma) ** 2)
        kernel[i] /= kernel[i].sum()

    prior = np.full(n, 1.0 / n)
    posteriors, log_evidence = [], 0.0
    for t in range(1, len(counts)):
        if t > 1:
            prior = posteriors[-1] @ kernel
        lam = counts[t - 1] * np.exp(gamma * (grid_values - 1.0))
        likelihood = sps.poisson.pmf(counts[t], lam)
        joint = likelihood * prior
        total = joint.sum()
        posteriors.append(joint / total)
        log_evidence += np.log(total)
    return np.array(posteriors), log_evidence


def _smoothed(values):
    index = pd.date_range("2021-01-01", periods=len(values), freq="D")
    return SmoothedSeries(values=pd.Series(values, index=index, dtype=float))


def test_kernel_rows_sum_to_one(small_grid):
    kernel = gaussian_transition_kernel(small_grid, 0.1)
    np.testing.assert_allclose(kernel.sum(axis=1), 1.0, atol=1e-12)
    assert kernel.shape == (small_grid.n_points, small_grid.n_points)


def test_kernel_row_peaks_on_diagonal(small_grid):
    kernel = gaussian_transition_kernel(small_grid, 0.25)
    assert np.all(np.argmax(kernel, axis=1) == np.arange(small_grid.n_points))


def test_kernel_rejects_non_positive_sigma(small_grid):
    with pytest.raises(EstimationError):
        gaussian_transition_kernel(small_grid, 0.0)


def test_priors_are_normalized(small_grid):
    assert uniform_prior(small_grid).sum() == pytest.approx(1.0)
    prior = gamma_prior(small_grid, 4.0)
    assert prior.sum() == pytest.approx(1.0)
    assert small_grid.values[np.argmax(prior)] == pytest.approx(3.0, abs=small_grid.step)


@pytest.mark.parametrize("sigma", [0.05, 0.25, 1.0])
def test_matches_brute_force_reference(sigma):
    grid = RtGrid(0.0, 4.0, 41)
    counts = [20.0, 24.0, 27.0, 35.0, 33.0, 30.0, 26.0, 25.0]
    ll = likelihood_matrix(_smoothed(counts), grid, SerialIntervalParam())
    posterior = posterior_sequence(ll, gaussian_transition_kernel(grid, sigma), uniform_prior(grid))

    expected_rows, expected_evidence = brute_force_filter(np.array(counts), grid.values, sigma)
    np.testing.assert_allclose(posterior.rows, expected_rows, rtol=0, atol=1e-10)
    assert posterior.log_evidence == pytest.approx(expected_evidence, rel=1e-10)


def test_posterior_rows_sum_to_one(small_grid):
    counts = 50 * np.exp(np.linspace(0, 2, 60))
    ll = likelihood_matrix(_smoothed(counts), small_grid, SerialIntervalParam())
    posterior = posterior_sequence(ll, gaussian_transition_kernel(small_grid, 0.1), uniform_prior(small_grid))
    np.testing.assert_allclose(posterior.rows.sum(axis=1), 1.0, atol=1e-9)
    assert posterior.rows.min() >= 0.0
    assert posterior.log_normalizers.shape == (59,)


def test_collapse_raises_with_date(small_grid):
    rows = np.full((2, small_grid.n_points), -np.inf)
    rows[0] = 0.0
    dates = pd.date_range("2021-05-01", periods=2, freq="D")
    ll = LikelihoodMatrix(dates=dates, grid=small_grid, rows=rows)
    with pytest.raises(PosteriorCollapsedError, match="^posterior collapsed") as info:
        posterior_sequence(ll, gaussian_transition_kernel(small_grid, 0.1), uniform_prior(small_grid))
    assert info.value.date == dates[1].date()


def test_rejects_mismatched_prior(small_grid):
    ll = likelihood_matrix(_smoothed([10.0, 11.0]), small_grid, SerialIntervalParam())
    with pytest.raises(EstimationError):
        posterior_sequence(ll, gaussian_transition_kernel(small_grid, 0.1), np.ones(5) / 5)


@pytest.mark.parametrize("sigma", [0.01, 0.05, 0.5])
def test_propagation_matches_dense_product(sigma):
    grid = RtGrid()
    kernel = gaussian_transition_kernel(grid, sigma)
    # two separated modes with an exact-zero gap between them
    posterior = sps.norm(0.8, 0.05).pdf(grid.values) + 0.3 * sps.norm(2.5, 0.1).pdf(grid.values)
    posterior[(grid.values > 1.2) & (grid.values < 2.0)] = 0.0
    posterior /= posterior.sum()

    banded = _propagate(posterior, kernel, kernel_bands(kernel))
    np.testing.assert_allclose(banded, posterior @ kernel, rtol=0, atol=1e-12)
    assert banded.sum() == pytest.approx(1.0, abs=1e-9)


def test_kernel_bands_cover_every_nonzero_entry():
    grid = RtGrid(n_points=301)
    kernel = gaussian_transition_kernel(grid, 0.02)
    first, last = kernel_bands(kernel)
    assert first[0] == 0 and last[-1] == grid.n_points - 1
    for row, lo, hi in zip(kernel, first, last):
        assert not row[:lo].any() and not row[hi + 1:].any()
    assert (last - first).max() < grid.n_points - 1
