import time
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from conftest import geometric_counts, make_cases
from nowcast.rt_core import (
    CaseSeries,
    CutoffNotReachedError,
    EmptyInputError,
    EstimatorConfig,
    InsufficientDataError,
    RtGrid,
    SmoothedSeries,
    estimate_rt,
    optimize_sigma,
    score_sigmas,
)
from nowcast.rt_core.estimator import _best_sigma, prepare_series
from nowcast.rt_core.likelihood import likelihood_matrix
from nowcast.sim_oracle import (
    DETERMINISTIC_MEAN,
    SimConfig,
    constant_trajectory,
    get_scenario,
    simulate_cases,
    step_trajectory,
)

BURN_IN = 20


def _truth_on(estimate, trajectory):
    return trajectory.true_r.reindex(estimate.dates)


def test_constant_r_is_recovered():
    trajectory = constant_trajectory(1.5)
    series = simulate_cases(trajectory, SimConfig(k0=500, mode=DETERMINISTIC_MEAN))
    estimate = estimate_rt(series)

    modes = estimate.frame["rt_mode"].iloc[BURN_IN:]
    truth = _truth_on(estimate, trajectory).iloc[BURN_IN:]
    hits = (modes - truth).abs() <= 0.2
    assert hits.mean() >= 0.8


def test_geometric_growth_gives_r_two():
    estimate = estimate_rt(make_cases(geometric_counts(50, 2.0, 80)))
    middle = estimate.frame["rt_mode"].iloc[BURN_IN:-5]
    assert middle.between(1.8, 2.2).all()
    assert (estimate.frame["hdi_low"] <= estimate.frame["rt_mode"]).all()
    assert (estimate.frame["rt_mode"] <= estimate.frame["hdi_high"]).all()


def test_step_change_crosses_one_near_change_day():
    trajectory = step_trajectory(2.0, 0.8, change_day=60)
    series = simulate_cases(trajectory, SimConfig(k0=100, mode=DETERMINISTIC_MEAN))
    estimate = estimate_rt(series)

    change_date = trajectory.dates[59]
    after_burn_in = estimate.frame["rt_mode"].iloc[BURN_IN:]
    below = after_burn_in[after_burn_in < 1.0]
    assert not below.empty
    crossing = below.index[0]
    assert abs((crossing - change_date).days) <= 10


def test_first_estimate_is_second_trimmed_date():
    counts = [0, 1, 3, 12, 15, 18, 22, 25, 30, 36, 40, 47, 55, 66]
    cases = make_cases(counts)
    config = EstimatorConfig(window_days=1, window_std=1.0, sigma=0.1)
    estimate = estimate_rt(cases, config)
    first_kept = cases.dates[3]
    assert estimate.dates[0] == first_kept + pd.Timedelta(days=1)
    assert estimate.dates[-1] == cases.dates[-1]


def test_estimates_are_deterministic():
    series = make_cases(geometric_counts(30, 1.3, 60))
    first = estimate_rt(series).to_frame()
    second = estimate_rt(series).to_frame()
    pd.testing.assert_frame_equal(first, second)


def test_fixed_sigma_is_used():
    estimate = estimate_rt(make_cases(geometric_counts(30, 1.3, 40)), EstimatorConfig(sigma=0.15))
    assert estimate.sigma == 0.15


def test_auto_sigma_comes_from_candidates():
    config = EstimatorConfig(sigma_candidates=(0.05, 0.1, 0.25))
    estimate = estimate_rt(make_cases(geometric_counts(30, 1.3, 40)), config)
    assert estimate.sigma in config.sigma_candidates


def test_sigma_ties_go_to_smallest():
    assert _best_sigma({0.5: -7.0, 0.1: -5.0, 0.05: -5.0}, (0.5, 0.1, 0.05)) == 0.05


def test_all_zero_series_carries_no_evidence():
    index = pd.date_range("2021-01-01", periods=10, freq="D")
    zeros = SmoothedSeries(values=pd.Series(np.zeros(10), index=index))
    config = EstimatorConfig()
    scores = score_sigmas(likelihood_matrix(zeros, config.grid, config.serial), config)
    assert sorted(scores) == sorted(config.sigma_candidates)
    for score in scores.values():
        assert score == pytest.approx(0.0, abs=1e-9)
    assert optimize_sigma(zeros, config) in config.sigma_candidates


def test_constant_truth_prefers_small_sigma():
    trajectory = constant_trajectory(1.5)
    series = simulate_cases(trajectory, SimConfig(k0=500, mode=DETERMINISTIC_MEAN))
    config = EstimatorConfig(sigma_candidates=(0.05, 1.0))
    smoothed = SmoothedSeries(values=series.counts.astype(float))
    scores = score_sigmas(likelihood_matrix(smoothed, config.grid, config.serial), config)
    assert scores[0.05] > scores[1.0]


def test_mean_and_mode_columns_present():
    frame = estimate_rt(make_cases(geometric_counts(40, 1.2, 50))).to_frame()
    assert list(frame.columns) == ["rt_mode", "rt_mean", "hdi_low", "hdi_high", "sigma", "flagged"]
    assert frame.index.name == "date"
    assert set(frame["flagged"].unique()) <= {0, 1}


def test_gamma_prior_gives_similar_estimates():
    cases = make_cases(geometric_counts(50, 2.0, 80))
    uniform = estimate_rt(cases, EstimatorConfig(sigma=0.1))
    gamma = estimate_rt(cases, EstimatorConfig(sigma=0.1, initial_prior="gamma"))
    tail = slice(BURN_IN, -5)
    np.testing.assert_allclose(
        uniform.frame["rt_mode"].iloc[tail], gamma.frame["rt_mode"].iloc[tail], atol=0.05
    )


def test_source_smoothed_values_are_used_when_requested():
    cases = make_cases(geometric_counts(50, 1.5, 40))
    published = SmoothedSeries(values=cases.counts.astype(float))
    with_source = CaseSeries(counts=cases.counts, source_label="x", source_smoothed=published)
    config = EstimatorConfig(sigma=0.1, use_source_smoothed=True)
    local = estimate_rt(with_source, replace(config, use_source_smoothed=False))
    source = estimate_rt(with_source, config)
    # published values are the unsmoothed counts, so the first days differ
    assert not np.allclose(local.frame["rt_mode"].to_numpy(), source.frame["rt_mode"].to_numpy())


def test_rounded_smoothing_still_estimates():
    estimate = estimate_rt(make_cases(geometric_counts(50, 1.5, 40)), EstimatorConfig(sigma=0.1, round_smoothed=True))
    assert len(estimate) == 39


def test_failures_carry_fixed_messages():
    with pytest.raises(EmptyInputError, match="^empty input"):
        estimate_rt(make_cases([]))
    with pytest.raises(CutoffNotReachedError, match="^series never reaches cutoff"):
        estimate_rt(make_cases([1, 2, 1, 2, 1]))
    with pytest.raises(InsufficientDataError, match="^insufficient data"):
        estimate_rt(make_cases([50]))


def test_zero_run_then_cases_is_flagged():
    counts = [40, 42, 45, 48, 50, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 30, 33, 35, 38]
    config = EstimatorConfig(window_days=1, window_std=1.0, sigma=0.25)
    estimate = estimate_rt(make_cases(counts), config)
    assert estimate.flagged == frozenset({pd.Timestamp("2021-01-16")})
    assert estimate.to_frame().loc["2021-01-16", "flagged"] == 1


@pytest.mark.slow
def test_long_noisy_series_is_fast():
    rng = np.random.default_rng(0)
    counts = rng.poisson(geometric_counts(200, 1.05, 500))
    start = time.perf_counter()
    estimate = estimate_rt(make_cases(counts))
    elapsed = time.perf_counter() - start
    assert len(estimate) == 499
    assert elapsed < 1.0


def _brute_force_log_evidence(rows, r, sigma):
    kernel = np.exp(-0.5 * ((r[None, :] - r[:, None]) / sigma) ** 2)
    kernel /= kernel.sum(axis=1, keepdims=True)
    belief = np.full(r.size, 1.0 / r.size)
    total = 0.0
    for t, row in enumerate(rows):
        prior = belief if t == 0 else belief @ kernel
        shift = row.max()
        joint = prior * np.exp(row - shift)
        total += shift + np.log(joint.sum())
        belief = joint / joint.sum()
    return total


def test_optimized_sigma_matches_brute_force_evidence():
    trajectory, sim_config = get_scenario("random-walk", seed=2)
    config = EstimatorConfig(grid=RtGrid(0.0, 6.0, 301), sigma_candidates=(0.05, 0.15, 0.5))
    smoothed = prepare_series(simulate_cases(trajectory, sim_config), config)
    rows = likelihood_matrix(smoothed, config.grid, config.serial).rows

    brute = {s: _brute_force_log_evidence(rows, config.grid.values, s) for s in config.sigma_candidates}
    scores = score_sigmas(likelihood_matrix(smoothed, config.grid, config.serial), config)
    for sigma, evidence in brute.items():
        assert scores[sigma] == pytest.approx(evidence, rel=1e-9, abs=1e-6)

    best = max(sorted(brute), key=lambda s: brute[s])
    assert optimize_sigma(smoothed, config) == best


def test_duplicate_candidates_are_scored_once():
    index = pd.date_range("2021-01-01", periods=30, freq="D")
    smoothed = SmoothedSeries(values=pd.Series(geometric_counts(50, 1.3, 30).astype(float), index=index))
    config = EstimatorConfig(sigma_candidates=(0.2, 0.2))
    scores = score_sigmas(likelihood_matrix(smoothed, config.grid, config.serial), config)
    assert list(scores) == [0.2]
    assert optimize_sigma(smoothed, config) == 0.2


@pytest.mark.parametrize("scale", [0.5, 3.0, 20.0])
def test_scaling_counts_keeps_likelihood_argmax(scale):
    grid = EstimatorConfig().grid
    serial = EstimatorConfig().serial
    true_r = np.r_[np.full(30, 1.8), np.full(30, 0.7)]
    values = 100.0 * np.exp(np.cumsum(serial.gamma * (true_r - 1.0)))
    index = pd.date_range("2021-01-01", periods=values.size, freq="D")

    base = likelihood_matrix(SmoothedSeries(values=pd.Series(values, index=index)), grid, serial)
    scaled = likelihood_matrix(SmoothedSeries(values=pd.Series(values * scale, index=index)), grid, serial)
    steps = np.abs(base.rows.argmax(axis=1) - scaled.rows.argmax(axis=1))
    assert steps.max() <= 1
    np.testing.assert_allclose(grid.values[base.rows.argmax(axis=1)], true_r[1:], atol=grid.values[1] + 1e-9)
