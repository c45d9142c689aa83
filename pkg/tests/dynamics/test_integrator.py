# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from annealab.config import env
from annealab.dynamics import IntegratorConfig, run_trajectory, sde_time, sgld_step
from annealab.exceptions import InvalidIntegrator, StepOverflow
from annealab.geometry import Configuration, sample_uniform_configuration
from annealab.landscapes import LandscapePotential, landscape_configuration
from annealab.potential import Cosine, InfoNCEPotential, PairSet, infonce_loss
from annealab.schedules import Constant, Logarithmic
from annealab.utils.seeding import chain_streams


@pytest.fixture
def instance():
    return InfoNCEPotential(Cosine(), PairSet.of(5, [(0, 1), (2, 3), (4, 0)]))


# ======================================================================================
# Integrator config


@pytest.mark.parametrize(
    ["kwargs", "field"],
    [
        (dict(eta0=0.0, steps=1), "eta0"),
        (dict(eta0=-1e-3, steps=1), "eta0"),
        (dict(eta0=1e-3, steps=-1), "steps"),
        (dict(eta0=1e-3, steps=1.5), "steps"),
        (dict(eta0=1e-3, steps=1, eta_decay=0.5), "eta_decay"),
        (dict(eta0=1e-3, steps=1, eta_decay=1.2), "eta_decay"),
        (dict(eta0=1e-3, steps=1, record_every=0), "record_every"),
        (dict(eta0=1e-3, steps=1, seed=-1), "seed"),
        (dict(eta0=1e-3, steps=1, seed=2**64), "seed"),
        (dict(eta0=1e-3, steps=1, time_mode="wall"), "time_mode"),
    ],
)
def test_integrator_config_invalid(kwargs, field):
    with pytest.raises(InvalidIntegrator) as e:
        IntegratorConfig(**kwargs)

    assert e.value.field == field


def test_eta_and_sde_time():
    _constant = IntegratorConfig(eta0=0.1, steps=10)
    _decaying = IntegratorConfig(eta0=0.1, steps=10, eta_decay=1.0)

    assert _constant.eta(7) == 0.1
    assert _decaying.eta(3) == pytest.approx(0.025)
    assert sde_time(_decaying, 3) == pytest.approx(0.1 + 0.05 + 0.1 / 3)
    assert sde_time(_decaying.with_changes(time_mode="step"), 3) == 3.0


# ======================================================================================
# Single steps


def test_step_fixed_point():
    _z = Configuration(np.tile([0.0, 0.0, 1.0], (4, 1)))
    _potential = InfoNCEPotential(Cosine(), PairSet.of(4, [(0, 1), (2, 3)]))
    _icfg = IntegratorConfig(eta0=0.1, steps=1, noise_on=False)

    _next = sgld_step(_z, 0, Constant(5.0), _icfg, _potential, None)

    np.testing.assert_array_equal(_next.points, _z.points)


def test_step_deterministic(instance):
    _z = sample_uniform_configuration(5, 3, np.random.default_rng(0))
    _icfg = IntegratorConfig(eta0=1e-3, steps=1)

    _first = sgld_step(_z, 4, Constant(2.0), _icfg, instance, np.random.default_rng(9))
    _second = sgld_step(_z, 4, Constant(2.0), _icfg, instance, np.random.default_rng(9))

    np.testing.assert_array_equal(_first.points, _second.points)
    assert _first != _z


def test_step_keeps_frozen_points():
    _potential = InfoNCEPotential(Cosine(), PairSet.of(4, [(0, 1), (2, 3)]), frozen=[1])
    _z = sample_uniform_configuration(4, 3, np.random.default_rng(1))
    _icfg = IntegratorConfig(eta0=1e-2, steps=1)

    _next = sgld_step(_z, 0, Constant(1.0), _icfg, _potential, np.random.default_rng(2))

    np.testing.assert_allclose(_next.points[1], _z.points[1], rtol=0, atol=1e-15)
    assert np.all(np.abs(np.linalg.norm(_next.points, axis=-1) - 1) < 1e-12)


def test_step_overflow(tilted):
    _icfg = IntegratorConfig(eta0=10.0, steps=5, noise_on=False)

    with pytest.raises(StepOverflow) as e:
        sgld_step(
            landscape_configuration(math.pi / 4),
            0,
            Constant(1.0),
            _icfg,
            LandscapePotential(tilted),
            None,
        )

    assert e.value.step == 0

    with pytest.raises(StepOverflow):
        run_trajectory(
            landscape_configuration(math.pi / 4),
            Constant(1.0),
            _icfg,
            LandscapePotential(tilted),
        )


# ======================================================================================
# Trajectories


@pytest.mark.parametrize(
    ["steps", "record_every", "records"],
    [(0, 1, 1), (10, 1, 11), (10, 3, 5), (9, 3, 4)],
)
def test_trajectory_records(tilted, steps, record_every, records):
    _z0 = landscape_configuration(1.0)
    _trajectory = run_trajectory(
        _z0,
        Constant(3.0),
        IntegratorConfig(eta0=1e-3, steps=steps, record_every=record_every, seed=4),
        LandscapePotential(tilted),
    )

    assert len(_trajectory) == records
    assert _trajectory.states[0] == _z0
    assert np.all(np.diff(_trajectory.times) > 0)
    assert _trajectory.times[-1] == steps
    np.testing.assert_allclose(_trajectory.beta_values, 3.0)


def test_trajectory_noiseless_descent(tilted):
    _start = -math.pi / 2 + 0.5
    _trajectory = run_trajectory(
        landscape_configuration(_start),
        Constant(6.0),
        IntegratorConfig(eta0=1e-2, steps=5000, record_every=100, noise_on=False),
        LandscapePotential(tilted),
    )

    assert np.all(np.diff(_trajectory.loss_values) <= 1e-12)
    assert _trajectory.u0_values[-1] == pytest.approx(tilted.global_value, abs=1e-6)


def test_trajectory_noiseless_infonce_descent(instance):
    _z0 = sample_uniform_configuration(5, 3, np.random.default_rng(5))
    _trajectory = run_trajectory(
        _z0,
        Constant(2.0),
        IntegratorConfig(eta0=1e-3, steps=100, noise_on=False),
        instance,
    )

    assert np.all(np.diff(_trajectory.loss_values) <= 1e-12)
    assert _trajectory.loss_values[0] == pytest.approx(
        infonce_loss(_z0, 2.0, instance.kind, instance.pairs)
    )


def test_trajectory_matches_steps(instance):
    _z0 = sample_uniform_configuration(5, 3, np.random.default_rng(6))
    _schedule = Logarithmic(c=1.0, K=2.0)
    _icfg = IntegratorConfig(eta0=1e-3, steps=20, record_every=20, seed=11)

    _trajectory = run_trajectory(_z0, _schedule, _icfg, instance)

    _rng = chain_streams(11, 0)[1]
    _z = _z0
    for k in range(_icfg.steps):
        _z = sgld_step(_z, k, _schedule, _icfg, instance, _rng)

    np.testing.assert_array_equal(_trajectory.final.points, _z.points)
    assert _trajectory.sde_times[-1] == sde_time(_icfg, 20)


def test_trajectory_reproducible(instance, monkeypatch):
    _z0 = sample_uniform_configuration(5, 3, np.random.default_rng(7))
    _icfg = IntegratorConfig(eta0=1e-3, steps=50, record_every=10, seed=3)

    _first = run_trajectory(_z0, Constant(4.0), _icfg, instance)

    monkeypatch.setattr(env, "NOISE_BLOCK", 7)
    _second = run_trajectory(_z0, Constant(4.0), _icfg, instance)

    for a, b in zip(_first.states, _second.states):
        np.testing.assert_array_equal(a.points, b.points)
    np.testing.assert_array_equal(_first.loss_values, _second.loss_values)


def test_trajectory_time_modes(tilted):
    _schedule = Logarithmic(c=0.5, K=2.0)
    _icfg = IntegratorConfig(eta0=0.01, steps=100, record_every=100, seed=1)

    _sde = run_trajectory(
        landscape_configuration(1.0), _schedule, _icfg, LandscapePotential(tilted)
    )
    _step = run_trajectory(
        landscape_configuration(1.0),
        _schedule,
        _icfg.with_changes(time_mode="step"),
        LandscapePotential(tilted),
    )

    assert _sde.time_mode == "sde"
    assert _sde.beta_values[-1] == pytest.approx(_schedule.beta(1.0))
    assert _step.beta_values[-1] == pytest.approx(_schedule.beta(100.0))
