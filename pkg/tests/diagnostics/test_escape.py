# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from annealab.diagnostics import (
    FailurePoint,
    estimate_exit_times,
    failure_curve,
    is_non_increasing_within_intervals,
    success_fraction,
    success_fraction_at,
    wilson_interval,
)
from annealab.dynamics import EnsembleResult, IntegratorConfig
from annealab.exceptions import AllCensored, InvalidInstance
from annealab.landscapes import BasinLabel, basin_of, deepest_suboptimal_basin


def synthetic_ensemble(flags, checkpoints=None) -> EnsembleResult:
    """
    An ensemble whose chain ``i`` succeeds when ``flags[i]``; the flag is stored in
    the first coordinate of the state.
    """
    _states = np.zeros((len(flags), 2, 2))
    _states[:, 0, 0] = np.asarray(flags, dtype=float)

    return EnsembleResult(
        master_seed=0,
        chains=len(flags),
        time_mode="sde",
        final_states=_states,
        labels=[None] * len(flags),
        exit_steps=np.full(len(flags), -1),
        exit_times=np.full(len(flags), np.nan),
        checkpoints=checkpoints or {},
    )


def succeeds(state: np.ndarray) -> bool:
    return state[0, 0] > 0.5


# ======================================================================================
# Success fractions


def test_success_fraction_all():
    _fraction = success_fraction(synthetic_ensemble([True] * 20), succeeds)

    assert _fraction.fraction == 1.0
    assert _fraction.ci_high == 1.0
    assert _fraction.ci_low < 1.0


def test_success_fraction_none():
    _fraction = success_fraction(synthetic_ensemble([False] * 20), succeeds)

    assert _fraction.fraction == 0.0
    assert _fraction.ci_low == 0.0


def test_success_fraction_width():
    _fraction = success_fraction(synthetic_ensemble([True, False] * 100), succeeds)

    assert _fraction.fraction == 0.5
    assert _fraction.ci_high - _fraction.ci_low == pytest.approx(0.14, abs=0.01)


def test_wilson_interval_shrinks():
    _widths = [
        np.subtract(*reversed(wilson_interval(m // 2, m))) for m in (200, 800, 3200)
    ]

    assert _widths[1] / _widths[0] == pytest.approx(0.5, abs=0.02)
    assert _widths[2] / _widths[1] == pytest.approx(0.5, abs=0.02)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_success_fraction_counts_failures():
    _ensemble = synthetic_ensemble([True] * 4)
    _ensemble.failures[2] = "overflow"

    assert success_fraction(_ensemble, succeeds).successes == 3


def test_success_fraction_at_checkpoints():
    _ensemble = synthetic_ensemble(
        [True] * 4,
        checkpoints={
            10: synthetic_ensemble([False] * 4).final_states,
            100: synthetic_ensemble([True, False, True, False]).final_states,
        },
    )

    assert success_fraction_at(_ensemble, 10, succeeds).fraction == 0.0
    assert success_fraction_at(_ensemble, 100, succeeds).fraction == 0.5

    with pytest.raises(KeyError):
        success_fraction_at(_ensemble, 50, succeeds)

    _curve = failure_curve(_ensemble, succeeds)

    assert [point.step for point in _curve] == [10, 100]
    assert [point.failure_fraction for point in _curve] == [1.0, 0.5]
    assert is_non_increasing_within_intervals(_curve)


def test_non_increasing_within_intervals():
    _decreasing = [
        FailurePoint(step=10, failure_fraction=0.6, ci_low=0.5, ci_high=0.7),
        FailurePoint(step=100, failure_fraction=0.62, ci_low=0.52, ci_high=0.72),
        FailurePoint(step=1000, failure_fraction=0.3, ci_low=0.2, ci_high=0.4),
    ]
    _increasing = [
        FailurePoint(step=10, failure_fraction=0.2, ci_low=0.15, ci_high=0.25),
        FailurePoint(step=100, failure_fraction=0.6, ci_low=0.5, ci_high=0.7),
    ]

    assert is_non_increasing_within_intervals(_decreasing)
    assert not is_non_increasing_within_intervals(_increasing)


# ======================================================================================
# Exit times


def test_exit_times_noiseless(symmetric):
    with pytest.raises(AllCensored):
        estimate_exit_times(
            symmetric,
            2.0,
            BasinLabel(0),
            4,
            200,
            IntegratorConfig(eta0=1e-2, steps=1, noise_on=False),
        )


def test_exit_times_hot_chains_escape(tilted):
    _estimate = estimate_exit_times(
        tilted,
        0.1,
        deepest_suboptimal_basin(tilted),
        20,
        20000,
        IntegratorConfig(eta0=1e-3, steps=1, seed=4),
    )

    assert _estimate.exited >= 18
    assert _estimate.ci_low < _estimate.mean < _estimate.ci_high
    assert all(
        sample.exit_step >= 1 for sample in _estimate.samples if not sample.censored
    )


def test_exit_times_increase_with_beta(symmetric):
    _basin = basin_of(symmetric, math.pi / 2)
    _means = [
        estimate_exit_times(
            symmetric,
            beta,
            _basin,
            100,
            50000,
            IntegratorConfig(eta0=1e-2, steps=1, seed=index),
        ).mean
        for index, beta in enumerate((0.5, 1.0, 1.5))
    ]

    assert _means[0] < _means[1] < _means[2]


def test_exit_times_from_saddle(symmetric):
    with pytest.raises(InvalidInstance):
        estimate_exit_times(
            symmetric,
            1.0,
            BasinLabel.saddle(),
            2,
            10,
            IntegratorConfig(eta0=1e-2, steps=1),
        )
