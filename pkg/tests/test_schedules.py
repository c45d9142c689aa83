# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from annealab import schedules
from annealab.exceptions import InvalidSchedule
from annealab.schedules import (
    Constant,
    Cosine as CosineRamp,
    CriticalRate,
    Logarithmic,
    Power,
    ScheduleClass,
    beta_at,
    classify_schedule,
    escapes_in_time,
    integrated_escape_rate,
    schedule_from_dict,
    survival_bound,
)


@pytest.mark.parametrize(
    ["schedule", "t", "expected"],
    [
        (Logarithmic(c=2.0, K=1.0001), math.e - 1.0001, 2.0),
        (Constant(beta0=4.0), 0.0, 4.0),
        (Constant(beta0=4.0), 1e9, 4.0),
        (Logarithmic(c=0.5, K=2.0), 98.0, 0.5 * math.log(100.0)),
        (Power(beta0=1.5, exponent=0.5), 3.0, 3.0),
        (CosineRamp(beta_start=1.0, beta_end=3.0, horizon=10.0), 0.0, 1.0),
        (CosineRamp(beta_start=1.0, beta_end=3.0, horizon=10.0), 5.0, 2.0),
        (CosineRamp(beta_start=1.0, beta_end=3.0, horizon=10.0), 50.0, 3.0),
    ],
)
def test_beta_at(schedule, t, expected):
    assert beta_at(schedule, t) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "schedule",
    [
        Logarithmic(c=0.7, K=1.5),
        Power(beta0=0.1, exponent=2.0),
        CosineRamp(beta_start=0.5, beta_end=8.0, horizon=100.0),
        CosineRamp(beta_start=2.0, beta_end=2.0, horizon=1.0),
    ],
)
def test_beta_at_non_decreasing(schedule):
    _betas = beta_at(schedule, np.linspace(0.0, 1000.0, 2001))

    assert np.all(_betas > 0)
    assert np.all(np.diff(_betas) >= 0)


@pytest.mark.parametrize("ceiling", [1.0, 10.0, 50.0])
def test_logarithmic_diverges(ceiling):
    _schedule = Logarithmic(c=1.5, K=2.0)
    _t = _schedule.time_to_reach(ceiling + 1.0)

    assert beta_at(_schedule, max(_t, 0.0)) > ceiling


def test_beta_at_negative_time():
    with pytest.raises(InvalidSchedule) as e:
        beta_at(Constant(beta0=1.0), -1.0)

    assert e.value.field == "t"


@pytest.mark.parametrize(
    ["factory", "field"],
    [
        (lambda: Constant(beta0=0.0), "beta0"),
        (lambda: Constant(beta0=math.inf), "beta0"),
        (lambda: Logarithmic(c=1.0, K=1.0), "K"),
        (lambda: Logarithmic(c=-1.0, K=2.0), "c"),
        (lambda: Power(beta0=1.0, exponent=0.0), "exponent"),
        (lambda: CosineRamp(beta_start=3.0, beta_end=1.0, horizon=1.0), "beta_end"),
        (lambda: CosineRamp(beta_start=1.0, beta_end=2.0, horizon=0.0), "horizon"),
    ],
)
def test_invalid_schedules(factory, field):
    with pytest.raises(InvalidSchedule) as e:
        factory()

    assert e.value.field == field


def test_schedule_from_dict():
    assert schedule_from_dict({"type": "logarithmic", "c": 1, "K": 2}) == Logarithmic(
        c=1.0, K=2.0
    )
    assert schedule_from_dict(Power(beta0=2.0, exponent=0.5).to_dict()) == Power(
        beta0=2.0, exponent=0.5
    )

    with pytest.raises(InvalidSchedule):
        schedule_from_dict({"type": "exponential", "rate": 1.0})

    with pytest.raises(InvalidSchedule):
        schedule_from_dict({"type": "constant", "beta0": 1.0, "gamma": 2.0})

    with pytest.raises(InvalidSchedule):
        schedule_from_dict({"type": "logarithmic", "c": 1.0})


# ======================================================================================
# Classification


@pytest.mark.parametrize(
    ["c", "expected"],
    [
        (0.25, ScheduleClass.SUBCRITICAL),
        (0.5, ScheduleClass.CRITICAL),
        (0.5 + 1e-13, ScheduleClass.CRITICAL),
        (1.5, ScheduleClass.SUPERCRITICAL),
    ],
)
def test_classify_schedule(c, expected):
    _critical = CriticalRate.from_barrier(2.0)

    assert _critical.c_star == 0.5
    assert classify_schedule(Logarithmic(c=c, K=2.0), _critical) is expected


def test_classify_non_logarithmic():
    _critical = CriticalRate.from_barrier(2.0)

    for schedule in (Constant(beta0=1.0), Power(beta0=1.0, exponent=0.5)):
        assert classify_schedule(schedule, _critical) is ScheduleClass.NON_LOGARITHMIC


def test_critical_rate_without_barrier():
    _critical = CriticalRate.from_barrier(0.0)

    assert math.isinf(_critical.c_star)
    assert (
        classify_schedule(Logarithmic(c=100.0, K=2.0), _critical)
        is ScheduleClass.SUBCRITICAL
    )

    with pytest.raises(ValueError):
        CriticalRate(delta_e_max=-1.0, c_star=-1.0)


# ======================================================================================
# Escape-rate predictions


def test_integrated_escape_rate_matches_quadrature():
    from scipy.integrate import quad

    _critical = CriticalRate.from_barrier(2.0)

    for c in (0.25, 0.5, 0.8):
        _schedule = Logarithmic(c=c, K=2.0)
        _expected, _ = quad(
            lambda u: float(schedules.escape_rate(_schedule, 0.7, _critical, u)),
            0.0,
            500.0,
        )

        assert float(
            integrated_escape_rate(_schedule, 0.7, _critical, 500.0)
        ) == pytest.approx(_expected, rel=1e-6)


def test_survival_bound_decays_below_critical():
    _critical = CriticalRate.from_barrier(1.0)
    _times = np.array([1e1, 1e2, 1e3, 1e4])

    _sub = survival_bound(Logarithmic(c=0.5, K=2.0), 1.0, _critical, _times)
    _super = survival_bound(Logarithmic(c=3.0, K=2.0), 1.0, _critical, _times)

    assert np.all(np.diff(_sub) < 0)
    assert _sub[-1] < 1e-80
    assert _super[-1] > 0.5


def test_escapes_in_time():
    _critical = CriticalRate.from_barrier(1.0)

    assert escapes_in_time(Logarithmic(c=0.5, K=2.0), _critical, 200.0)
    assert not escapes_in_time(Logarithmic(c=2.0, K=2.0), _critical, 200.0)
    assert escapes_in_time(
        Logarithmic(c=2.0, K=2.0), CriticalRate.from_barrier(0.0), 200.0
    )

    with pytest.raises(InvalidSchedule):
        escapes_in_time(Constant(beta0=1.0), _critical, 1.0)
