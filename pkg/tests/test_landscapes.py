# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from annealab.exceptions import DegenerateCritical, InvalidInstance, NotSuboptimal
from annealab.geometry import wrap_angle
from annealab.landscapes import (
    BasinLabel,
    CriticalType,
    InfoNCEMicro,
    LandscapePotential,
    SymmetricDoubleWell,
    TiltedDoubleWell,
    barrier_heights,
    basin_indices,
    basin_of,
    build_infonce_micro,
    critical_points,
    deepest_suboptimal_basin,
    escape_prefactor,
    global_basin,
    kramers_prefactor,
    landscape_configuration,
    landscape_eval,
    landscape_from_dict,
    stratified_angle_init,
)
from annealab.potential import Cosine, PairSet, scaled_loss
from annealab.utils.seeding import chain_streams

VALLEY_GAP = 0.6
"""
Half-gap between the two negatives of :func:`valley_micro` around the angle pi.
"""


def _angle_distance(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


def _basin_at(spec, angle: float) -> BasinLabel:
    """
    Label of the minimum closest to ``angle``.
    """
    _index = min(
        range(len(spec.minima)),
        key=lambda k: _angle_distance(spec.minima[k].angle, angle),
    )

    return BasinLabel(_index)


@pytest.fixture
def valley_micro():
    """
    The moving anchor has its positive at 0 and two negatives straddling pi.

    The limiting potential is zero on the positive's side of the circle and has a
    second, suboptimal valley at pi where the two negatives tie.
    """
    return build_infonce_micro(
        [0.0, 0.0, math.pi - VALLEY_GAP, -math.pi + VALLEY_GAP],
        Cosine(),
        PairSet.of(4, [(0, 1)]),
        0,
    )


# ======================================================================================
# Evaluation and critical points


@pytest.mark.parametrize(
    ["theta", "expected"],
    [(math.pi / 2, (-1.0, 0.0, 4.0)), (0.0, (1.0, 0.0, -4.0))],
)
def test_landscape_eval_symmetric(symmetric, theta, expected):
    np.testing.assert_allclose(landscape_eval(symmetric, theta), expected, atol=1e-14)


def test_landscape_eval_tilted(tilted):
    _value, _slope, _curvature = landscape_eval(tilted, -math.pi / 2)
    _h = 1e-4

    assert _value == pytest.approx(-1.2, abs=1e-14)
    assert _slope == pytest.approx(0.0, abs=1e-14)
    assert _curvature == pytest.approx(
        (
            tilted.value(-math.pi / 2 + _h)
            - 2 * _value
            + tilted.value(-math.pi / 2 - _h)
        )
        / _h**2,
        rel=1e-6,
    )


def test_landscape_periodic(tilted):
    _theta = np.linspace(-math.pi, math.pi, 17)

    np.testing.assert_allclose(
        tilted.value(_theta + 2 * math.pi), tilted.value(_theta), atol=1e-12
    )


def test_critical_points_symmetric(symmetric):
    _points = critical_points(symmetric)

    assert len(_points) == 4
    for angle, value, type in [
        (-math.pi / 2, -1.0, CriticalType.MIN),
        (math.pi / 2, -1.0, CriticalType.MIN),
        (0.0, 1.0, CriticalType.SADDLE),
        (math.pi, 1.0, CriticalType.SADDLE),
    ]:
        _match = [p for p in _points if _angle_distance(p.angle, angle) < 1e-10]
        assert len(_match) == 1
        assert _match[0].value == pytest.approx(value, abs=1e-12)
        assert _match[0].type is type


@pytest.mark.parametrize("gamma", [1e-4, 0.05, 0.2, 0.45])
def test_critical_points_alternate(gamma):
    _spec = TiltedDoubleWell(gamma=gamma)
    _points = critical_points(_spec)

    assert len(_points) == 4
    assert all(abs(_spec.derivative(p.angle)) <= 1e-10 for p in _points)
    assert [p.is_min for p in _points] in ([True, False] * 2, [False, True] * 2)


def test_critical_points_tilted(tilted):
    _minima = tilted.minima

    assert len(_minima) == 2
    assert tilted.global_value == pytest.approx(-1.2, abs=1e-12)
    assert min(_minima, key=lambda p: p.value).angle == pytest.approx(
        -math.pi / 2, abs=1e-9
    )

    for saddle in tilted.saddles:
        assert math.sin(saddle.angle) == pytest.approx(0.05, abs=1e-12)


def test_critical_points_small_tilt(symmetric):
    _tilted = TiltedDoubleWell(gamma=1e-4)

    for point in critical_points(symmetric):
        assert min(
            _angle_distance(point.angle, other.angle)
            for other in critical_points(_tilted)
        ) < 1e-3


def test_tilt_range():
    for gamma in (0.0, 0.5, -0.1):
        with pytest.raises(InvalidInstance):
            TiltedDoubleWell(gamma=gamma)


# ======================================================================================
# Barriers and prefactors


def test_barrier_heights_symmetric(symmetric):
    _report = barrier_heights(symmetric)

    assert _report.delta_e_max == pytest.approx(2.0, abs=1e-12)
    assert _report.c_star == pytest.approx(0.5, rel=1e-12)
    assert _report.suboptimal == ()

    with pytest.raises(NotSuboptimal):
        deepest_suboptimal_basin(symmetric)


def test_barrier_heights_tilted(tilted):
    _report = barrier_heights(tilted)
    _shallow = _basin_at(tilted, math.pi / 2)

    assert len(_report.suboptimal) == 1
    assert _report.suboptimal[0].basin == _shallow
    assert deepest_suboptimal_basin(tilted) == _shallow

    # Saddles at sin = gamma / 4: U = 1 - gamma^2 / 8 + gamma^2 / 4.
    assert _report.delta_e_max == pytest.approx(1.005 + 0.8, abs=1e-10)
    assert _report.c_star == pytest.approx(1 / 1.805, rel=1e-10)
    assert _report.critical.c_star == _report.c_star


def test_kramers_prefactor_symmetric(symmetric):
    _basin = _basin_at(symmetric, math.pi / 2)

    assert kramers_prefactor(symmetric, _basin) == pytest.approx(2 / math.pi)
    assert escape_prefactor(symmetric, _basin) == pytest.approx(4 / math.pi)


def test_kramers_prefactor_tilted(tilted):
    _shallow = _basin_at(tilted, math.pi / 2)
    _expected = math.sqrt(3.8 * 3.99) / (2 * math.pi)

    assert kramers_prefactor(tilted, _shallow) == pytest.approx(_expected, rel=1e-9)
    assert escape_prefactor(tilted, _shallow) == pytest.approx(
        2 * _expected, rel=1e-9
    )

    for index in range(len(tilted.minima)):
        assert kramers_prefactor(tilted, BasinLabel(index)) > 0


def test_kramers_prefactor_saddle(symmetric):
    with pytest.raises(DegenerateCritical):
        kramers_prefactor(symmetric, BasinLabel.saddle())


# ======================================================================================
# Basins


@pytest.mark.parametrize(
    ["theta", "nearest"],
    [(math.pi / 2, math.pi / 2), (0.1, math.pi / 2), (-0.1, -math.pi / 2)],
)
def test_basin_of_symmetric(symmetric, theta, nearest):
    assert basin_of(symmetric, theta) == _basin_at(symmetric, nearest)


@pytest.mark.parametrize("theta", [0.0, math.pi, -math.pi])
def test_basin_of_saddle(symmetric, theta):
    _label = basin_of(symmetric, theta)

    assert _label.is_saddle
    assert str(_label) == "saddle"


def test_basin_constant_along_gradient_flow(tilted):
    _theta = np.random.default_rng(3).uniform(-math.pi, math.pi, 200)
    _labels = basin_indices(tilted, _theta)

    for _ in range(50):
        _theta = wrap_angle(_theta - 0.01 * tilted.derivative(_theta))

    np.testing.assert_array_equal(basin_indices(tilted, _theta), _labels)


def test_global_basin(tilted):
    assert global_basin(tilted) == _basin_at(tilted, -math.pi / 2)
    assert tilted.is_global(global_basin(tilted))
    assert not tilted.is_global(BasinLabel.saddle())


# ======================================================================================
# InfoNCE micro landscapes


def test_micro_coincident_positive():
    _spec = build_infonce_micro(
        [0.0, 0.0, 2.5], Cosine(), PairSet.of(3, [(0, 1)]), 0
    )
    _report = barrier_heights(_spec)

    assert _spec.value(0.0) == 0.0
    assert len(_spec.minima) == 1
    assert _spec.minima[0].value == 0.0
    assert basin_of(_spec, 0.0) == BasinLabel(0)
    assert _report.barriers == ()
    assert math.isinf(_report.c_star)


def test_micro_suboptimal_valley(valley_micro):
    _minima = sorted(valley_micro.minima, key=lambda p: p.value)

    assert len(_minima) == 2
    assert _minima[0].value == 0.0
    assert _minima[0].angle == pytest.approx(0.0, abs=1e-4)
    assert _angle_distance(_minima[1].angle, math.pi) < 1e-6
    assert _minima[1].value == pytest.approx(1 + math.cos(VALLEY_GAP), abs=1e-9)

    # The valley is left over the peaks of its two sinusoidal flanks.
    _barrier = 2 * math.cos(VALLEY_GAP / 2) - 1 - math.cos(VALLEY_GAP)
    _report = barrier_heights(valley_micro)

    assert _report.delta_e_max == pytest.approx(_barrier, abs=1e-8)
    assert deepest_suboptimal_basin(valley_micro) == basin_of(valley_micro, 3.0)


def test_micro_not_smooth(valley_micro):
    with pytest.raises(DegenerateCritical):
        kramers_prefactor(valley_micro, deepest_suboptimal_basin(valley_micro))


def test_micro_flat():
    with pytest.raises(DegenerateCritical):
        build_infonce_micro([0.5, 0.0, 0.0], Cosine(), PairSet.of(3, [(1, 2)]), 0)


def test_micro_scaled_loss_matches_configuration(valley_micro):
    _spec = InfoNCEMicro(
        angles=valley_micro.angles,
        moving=0,
        kind=Cosine(),
        pairs=valley_micro.pairs,
        beta=5.0,
    )

    assert _spec.smooth
    assert _spec.value(1.0) == pytest.approx(
        scaled_loss(_spec.configuration(1.0), 5.0, Cosine(), _spec.pairs), rel=1e-12
    )


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(angles=(0.0, 1.0), moving=0, pairs=PairSet.of(2, [(0, 1)])),
        dict(angles=(0.0, 1.0, 2.0), moving=0, pairs=PairSet.of(4, [(0, 1)])),
        dict(angles=(0.0, 1.0, 2.0), moving=3, pairs=PairSet.of(3, [(0, 1)])),
        dict(angles=(0.0, 1.0, 2.0), moving=0, pairs=PairSet.of(3, [(0, 1)]), beta=0),
    ],
)
def test_micro_invalid(kwargs):
    with pytest.raises(InvalidInstance):
        InfoNCEMicro(kind=Cosine(), **kwargs)


@pytest.mark.parametrize(
    "spec",
    [
        SymmetricDoubleWell(),
        TiltedDoubleWell(gamma=0.3),
        InfoNCEMicro(
            angles=(0.0, 0.0, 2.5),
            moving=0,
            kind=Cosine(),
            pairs=PairSet.of(3, [(0, 1)]),
        ),
    ],
)
def test_landscape_from_dict(spec):
    assert landscape_from_dict(spec.to_dict()) == spec


def test_landscape_from_dict_unknown():
    with pytest.raises(InvalidInstance):
        landscape_from_dict({"family": "mexican-hat"})


# ======================================================================================
# Driving the integrator


def test_landscape_potential_gradient(tilted):
    _potential = LandscapePotential(tilted)
    _theta = 0.7
    _points = landscape_configuration(_theta).points

    _gradient = _potential.riemannian_gradient(_points.copy(), 1.0)
    _tangent = np.array([-math.sin(_theta), math.cos(_theta)])

    np.testing.assert_allclose(
        _gradient[0], tilted.derivative(_theta) * _tangent, atol=1e-14
    )
    np.testing.assert_array_equal(_gradient[1], 0.0)
    assert float(_potential.loss(_points, 1.0)) == pytest.approx(tilted.value(_theta))


def test_stratified_angle_init():
    _init = stratified_angle_init()
    _rng = np.random.default_rng(0)
    _chains = 8

    for chain in range(_chains):
        _points = _init(chain, _chains, _rng)
        _angle = math.atan2(_points[0, 1], _points[0, 0])
        _low = -math.pi + 2 * math.pi * chain / _chains

        assert _low - 1e-12 <= _angle <= _low + 2 * math.pi / _chains + 1e-12
        np.testing.assert_allclose(_points[1], [1.0, 0.0])


def test_stratified_angle_init_depends_on_ensemble_size():
    _init = stratified_angle_init()

    def _angle(chain, chains):
        _points = _init(chain, chains, chain_streams(42, chain)[0])
        return math.atan2(_points[0, 1], _points[0, 0])

    assert _angle(3, 8) == _angle(3, 8)

    _arc = 2 * math.pi / 16
    assert -math.pi + 3 * _arc - 1e-12 <= _angle(3, 16) <= -math.pi + 4 * _arc + 1e-12
    assert _angle(3, 16) != _angle(3, 8)
