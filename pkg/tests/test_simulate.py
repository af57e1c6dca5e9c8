import math

import numpy as np
import pytest

from parasitech import (
    HarnessError,
    InvalidInputError,
    LogisticParams,
    SimConfig,
    fit_evolution,
    logistic_value,
    monte_carlo_recovery,
    simulate_pair,
    simulate_series,
)
from parasitech.simulate import derive_seed, early_phase_cutoff


HOST_LAW = LogisticParams(k=100.0, a=6.0, b=0.05)  # inflection at t=120
PARASITE_LAW = LogisticParams(k=50.0, a=6.96, b=0.087)  # inflection at t=80


def early_config(**overrides):
    defaults = dict(
        host=HOST_LAW,
        parasites=(PARASITE_LAW,),
        t_start=0.0,
        t_end=43.0,
        n_points=44,
        noise_sigma=0.0,
        missing_prob=0.0,
        seed=11,
    )
    defaults.update(overrides)
    return SimConfig(**defaults)


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            early_config(t_start=50.0, t_end=50.0)
        with pytest.raises(InvalidInputError):
            early_config(n_points=3)
        with pytest.raises(InvalidInputError):
            early_config(noise_sigma=-0.1)
        with pytest.raises(InvalidInputError):
            early_config(missing_prob=1.0)
        with pytest.raises(InvalidInputError):
            early_config(seed=-1)
        with pytest.raises(InvalidInputError):
            SimConfig(
                host=HOST_LAW, parasites=(), t_start=0, t_end=10, n_points=5
            )

    def test_grid(self):
        grid = early_config().grid()
        assert grid.size == 44
        assert grid[0] == 0.0
        assert grid[-1] == 43.0


class TestSimulateSeries:
    def test_noiseless_matches_law_exactly(self):
        grid = np.linspace(0, 40, 20)
        s = simulate_series(HOST_LAW, grid, noise_sigma=0.0, seed=3)
        np.testing.assert_array_equal(s.values, logistic_value(HOST_LAW, grid))
        np.testing.assert_array_equal(s.times, grid)

    def test_same_seed_same_series(self):
        grid = np.linspace(0, 40, 30)
        a = simulate_series(HOST_LAW, grid, 0.1, 0.2, seed=99)
        b = simulate_series(HOST_LAW, grid, 0.1, 0.2, seed=99)
        assert a == b

    def test_different_seeds_differ(self):
        grid = np.linspace(0, 40, 30)
        a = simulate_series(HOST_LAW, grid, 0.1, seed=1)
        b = simulate_series(HOST_LAW, grid, 0.1, seed=2)
        assert not np.array_equal(a.values, b.values)

    def test_log_noise_magnitude(self):
        grid = np.linspace(0, 100, 10000)
        sigma = 0.05
        s = simulate_series(PARASITE_LAW, grid, noise_sigma=sigma, seed=5)
        log_resid = np.log(s.values) - np.log(logistic_value(PARASITE_LAW, grid))
        sample_sd = float(np.std(log_resid, ddof=1))
        assert abs(sample_sd - sigma) / sigma < 0.03

    def test_missingness_drops_points(self):
        grid = np.linspace(0, 40, 200)
        s = simulate_series(HOST_LAW, grid, missing_prob=0.3, seed=7)
        assert s.n < 200
        assert s.n > 100  # ~140 expected
        assert set(s.times.tolist()) <= set(grid.tolist())

    def test_bad_grid(self):
        with pytest.raises(InvalidInputError):
            simulate_series(HOST_LAW, [1.0, 1.0, 2.0], seed=1)


class TestSimulatePair:
    def test_noiseless_early_phase_recovers_ratio(self):
        host, parasites = simulate_pair(early_config())
        fit = fit_evolution(host, parasites[0])
        true_b = PARASITE_LAW.b / HOST_LAW.b
        assert abs(fit.b - true_b) < 1e-3

    def test_missingness_shrinks_intersection_but_runs(self):
        config = early_config(missing_prob=0.3, noise_sigma=0.02)
        host, parasites = simulate_pair(config)
        fit = fit_evolution(host, parasites[0])
        assert fit.n_paired < 44
        assert fit.n_paired >= 4

    def test_many_parasites_distinct_streams(self):
        laws = tuple(
            LogisticParams(k=50.0 + 10 * i, a=6.9, b=0.08 + 0.01 * i)
            for i in range(6)
        )
        config = early_config(parasites=laws, noise_sigma=0.05)
        host, parasites = simulate_pair(config)
        assert len(parasites) == 6
        assert host.name == "host" and host.role == "host"
        assert [p.name for p in parasites] == [f"parasite{i+1}" for i in range(6)]
        # distinct sub-seeds -> distinct noise
        for i in range(6):
            for j in range(i + 1, 6):
                assert not np.array_equal(parasites[i].values, parasites[j].values)

    def test_determinism(self):
        config = early_config(noise_sigma=0.05, missing_prob=0.1)
        assert simulate_pair(config) == simulate_pair(config)


class TestSeedDerivation:
    def test_deterministic_and_distinct(self):
        assert derive_seed(42, 0, 1) == derive_seed(42, 0, 1)
        seen = {derive_seed(42, s, i) for s in (0, 1) for i in range(50)}
        assert len(seen) == 100


class TestEarlyPhaseCutoff:
    def test_cutoff_matches_law(self):
        t_cut = early_phase_cutoff(HOST_LAW, 0.1)
        np.testing.assert_allclose(
            logistic_value(HOST_LAW, t_cut), 0.1 * HOST_LAW.k, rtol=1e-12
        )
        assert logistic_value(HOST_LAW, t_cut - 1.0) < 0.1 * HOST_LAW.k

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            early_phase_cutoff(HOST_LAW, 1.5)


class TestMonteCarloRecovery:
    def test_noiseless_is_nearly_unbiased(self):
        # distinct laws: noiseless curves are not *exactly* log-log linear
        # (the power law is a small-value approximation), so standard errors
        # stay positive, but the bias is tiny
        summary = monte_carlo_recovery(early_config(), replicates=5)
        assert summary.replicates == 5
        assert summary.failures == 0
        assert abs(summary.bias) < 1e-3
        assert len(summary.estimates) == 5

    def test_noiseless_identical_laws_degenerate(self):
        # identical laws make the parasite array equal the host array, the
        # residuals exactly zero, and every CI a point: coverage degenerates
        config = early_config(parasites=(HOST_LAW,))
        summary = monte_carlo_recovery(config, replicates=5)
        assert summary.perfect_fits == 5
        assert math.isnan(summary.coverage_95)
        assert summary.true_b == 1.0
        assert abs(summary.bias) < 1e-3
        assert summary.estimates == (1.0,) * 5

    def test_determinism(self):
        config = early_config(noise_sigma=0.03, seed=21)
        a = monte_carlo_recovery(config, replicates=20)
        b = monte_carlo_recovery(config, replicates=20)
        assert a == b

    def test_estimates_sorted(self):
        config = early_config(noise_sigma=0.03, seed=21)
        summary = monte_carlo_recovery(config, replicates=20)
        assert list(summary.estimates) == sorted(summary.estimates)

    def test_error_shrinks_with_window(self):
        # noiseless estimation error decreases as the window's top edge
        # pulls back toward the curve origin (anchored deep in the left
        # tail, where both laws are vanishingly small)
        errors = []
        true_b = PARASITE_LAW.b / HOST_LAW.b
        for t_end in (60.0, 20.0, -20.0):
            config = early_config(t_start=-100.0, t_end=t_end)
            summary = monte_carlo_recovery(
                config, replicates=1, early_phase_only=False
            )
            errors.append(abs(summary.estimates[0] - true_b))
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 5e-4

    def test_full_window_bias_exceeds_early_phase(self):
        # the power law is a small-value approximation: sampling across
        # saturation must show larger systematic bias
        config = early_config(
            t_start=0.0, t_end=200.0, n_points=100, noise_sigma=0.0
        )
        early = monte_carlo_recovery(config, replicates=1, early_phase_only=True)
        full = monte_carlo_recovery(config, replicates=1, early_phase_only=False)
        assert abs(full.bias) > abs(early.bias)
        assert abs(full.bias) > 0.05

    def test_k_scale_invariance(self):
        config = early_config()
        scaled = early_config(
            host=LogisticParams(k=300.0, a=6.0, b=0.05),
            parasites=(LogisticParams(k=150.0, a=6.96, b=0.087),),
        )
        a = monte_carlo_recovery(config, replicates=1)
        b = monte_carlo_recovery(scaled, replicates=1)
        np.testing.assert_allclose(a.estimates[0], b.estimates[0], atol=1e-6)

    def test_all_failures_is_harness_error(self):
        # early-phase cutoff falls before the grid: every restrict() fails
        bad_host = LogisticParams(k=100.0, a=-5.0, b=0.05)
        config = early_config(host=bad_host)
        with pytest.raises(HarnessError):
            monte_carlo_recovery(config, replicates=3)

    def test_failures_counted_not_fatal(self):
        # heavy dropout on a tiny grid: some replicates lose too many points
        config = early_config(n_points=5, missing_prob=0.6, seed=3)
        summary = monte_carlo_recovery(config, replicates=40)
        assert summary.failures > 0
        assert len(summary.estimates) == 40 - summary.failures

    def test_replicates_validated(self):
        with pytest.raises(InvalidInputError):
            monte_carlo_recovery(early_config(), replicates=0)
