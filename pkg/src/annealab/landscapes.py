# -*- coding: utf-8 -*-
"""
================================
 Benchmark landscapes on S¹
================================

One-dimensional potentials :math:`U(\\theta)` on the circle with exactly computable
critical points, barrier heights, basins and Eyring-Kramers prefactors. They are the
ground truth the annealing experiments are measured against.

- :class:`SymmetricDoubleWell`: :math:`U = \\cos 2\\theta`, two equal wells.
- :class:`TiltedDoubleWell`: :math:`U = \\cos 2\\theta + \\gamma \\sin \\theta`, a
  deep well at :math:`-\\pi/2` and a shallow one at :math:`+\\pi/2`.
- :class:`InfoNCEMicro`: the limiting potential (or the scaled loss at a finite
  :math:`\\beta`) of a small planar InfoNCE instance, with one embedding moving on
  the circle and every other one frozen.

A landscape also drives the integrator through :class:`LandscapePotential`: the
state is a two-point planar configuration whose first point moves and whose second
point is a frozen reference at angle 0.
"""
import abc
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .dynamics.ensemble import InitialCondition
from .exceptions import DegenerateCritical, InvalidInstance, NotSuboptimal
from .geometry import Configuration, wrap_angle
from .potential import (
    PairSet,
    Potential,
    SimilarityKind,
    infonce_loss,
    limiting_potential,
    similarity_from_dict,
)
from .schedules import CriticalRate

logger = logging.getLogger(__name__)

GRID_POINTS: int = 1 << 16
"""
Resolution of the circular scans locating critical points.
"""

ROOT_TOLERANCE: float = 1e-12
"""
Angular tolerance of the bisection refinement of critical points.
"""

DEGENERATE_CURVATURE: float = 1e-8
"""
Critical points with ``|U''|`` below this value are degenerate.
"""

SADDLE_TOLERANCE: float = 1e-10
"""
Angles this close to a saddle are labelled as the saddle itself.
"""

GLOBAL_TOLERANCE: float = 1e-9
"""
Minima within this distance of the lowest value are global minima.
"""

PLATEAU_TOLERANCE: float = 1e-12


class CriticalType(str, Enum):
    MIN = "min"
    SADDLE = "saddle"


@dataclass(frozen=True)
class CriticalPoint:
    """
    A critical point of a landscape.

    Parameters
    ----------
    angle : float
        Position in ``[-pi, pi)``.

    value : float
        :math:`U` at ``angle``.

    type : CriticalType
        Minimum or saddle; on the circle, saddles are the local maxima.

    curvature : float
        :math:`U''` at ``angle``.
    """

    angle: float
    value: float
    type: CriticalType
    curvature: float

    @property
    def is_min(self) -> bool:
        return self.type is CriticalType.MIN


@dataclass(frozen=True)
class BasinLabel:
    """
    The basin of a state: an index into :attr:`LandscapeSpec.minima`, or
    :attr:`SADDLE_INDEX` for states on a basin boundary.
    """

    SADDLE_INDEX: ClassVar[int] = -1

    index: int

    @classmethod
    def saddle(cls) -> "BasinLabel":
        return cls(cls.SADDLE_INDEX)

    @property
    def is_saddle(self) -> bool:
        return self.index == self.SADDLE_INDEX

    def __str__(self) -> str:
        return "saddle" if self.is_saddle else f"basin-{self.index}"


@dataclass(frozen=True)
class BasinBarrier:
    """
    Escape cost of one basin: toward a global basin for a suboptimal one, toward a
    neighbouring basin when every basin is global.
    """

    basin: BasinLabel
    minimum: CriticalPoint
    saddle: CriticalPoint
    delta_e: float
    suboptimal: bool = True


@dataclass(frozen=True)
class BarrierReport:
    """
    Barriers of every suboptimal basin, their maximum and the critical rate.
    """

    barriers: Tuple[BasinBarrier, ...]
    delta_e_max: float
    c_star: float

    @property
    def delta_es(self) -> List[float]:
        return [barrier.delta_e for barrier in self.barriers]

    @property
    def suboptimal(self) -> Tuple[BasinBarrier, ...]:
        return tuple(barrier for barrier in self.barriers if barrier.suboptimal)

    @property
    def critical(self) -> CriticalRate:
        return CriticalRate(delta_e_max=self.delta_e_max, c_star=self.c_star)


# ======================================================================================
# Landscape specifications


class LandscapeSpec(abc.ABC):
    """
    A potential :math:`U(\\theta)` on the circle.

    Subclasses supply :math:`U`, :math:`U'` and :math:`U''` vectorised over angles.
    Critical structure, barriers and basins are computed once, on first access, and
    cached on the instance.
    """

    family: ClassVar[str]

    smooth: ClassVar[bool] = True
    """
    Whether :math:`U` is twice differentiable, i.e. whether curvature-based formulae
    apply.
    """

    @abc.abstractmethod
    def value(self, theta: np.ndarray) -> np.ndarray:
        """
        :math:`U(\\theta)`.
        """

    @abc.abstractmethod
    def derivative(self, theta: np.ndarray) -> np.ndarray:
        """
        :math:`U'(\\theta)`.
        """

    @abc.abstractmethod
    def second_derivative(self, theta: np.ndarray) -> np.ndarray:
        """
        :math:`U''(\\theta)`.
        """

    @abc.abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """
        Serialisable description of the landscape.
        """

    # ----------------------------------------------------------------------------------
    # Critical structure

    def _locate_critical_points(self) -> List[CriticalPoint]:
        """
        Roots of :math:`U'` by a circular grid scan plus bisection refinement.

        The grid is offset by half a cell so that symmetric critical points (e.g. at
        0 or at the wrap-around angle) fall strictly inside a cell.
        """
        _h = 2.0 * math.pi / GRID_POINTS
        _grid = -math.pi + _h / 2.0 + _h * np.arange(GRID_POINTS + 1)
        _slope = self.derivative(_grid)

        _roots: List[float] = [float(_grid[k]) for k in np.nonzero(_slope[:-1] == 0)[0]]
        for k in np.nonzero(_slope[:-1] * _slope[1:] < 0)[0]:
            _roots.append(
                brentq(
                    lambda theta: float(self.derivative(theta)),
                    _grid[k],
                    _grid[k + 1],
                    xtol=ROOT_TOLERANCE / 10.0,
                )
            )

        _points = []
        for _root in sorted({wrap_angle(root) for root in _roots}):
            _curvature = float(self.second_derivative(_root))
            _residual = abs(float(self.derivative(_root)))

            if abs(_curvature) < DEGENERATE_CURVATURE:
                raise DegenerateCritical(
                    f"Critical point at {_root!r} of {self!r} is flat: "
                    f"|U''| = {abs(_curvature):.3e}."
                )

            if _residual > 1e-10:
                logger.warning(
                    "critical_point_residual angle=%r residual=%.3e", _root, _residual
                )

            _points.append(
                CriticalPoint(
                    angle=_root,
                    value=float(self.value(_root)),
                    type=CriticalType.MIN if _curvature > 0 else CriticalType.SADDLE,
                    curvature=_curvature,
                )
            )

        return _points

    @cached_property
    def critical(self) -> Tuple[CriticalPoint, ...]:
        """
        All critical points, sorted by angle.
        """
        _points = tuple(sorted(self._locate_critical_points(), key=lambda p: p.angle))

        logger.debug(
            "critical_points family=%s count=%d", self.family, len(_points)
        )

        return _points

    @cached_property
    def minima(self) -> Tuple[CriticalPoint, ...]:
        return tuple(point for point in self.critical if point.is_min)

    @cached_property
    def saddles(self) -> Tuple[CriticalPoint, ...]:
        return tuple(point for point in self.critical if not point.is_min)

    @cached_property
    def global_value(self) -> float:
        """
        Lowest value of :math:`U`.
        """
        return min(point.value for point in self.minima)

    def is_global(self, basin: BasinLabel) -> bool:
        return (
            not basin.is_saddle
            and self.minima[basin.index].value <= self.global_value + GLOBAL_TOLERANCE
        )

    @cached_property
    def _saddle_angles(self) -> np.ndarray:
        return np.array([point.angle for point in self.saddles])

    @cached_property
    def _interval_basin(self) -> np.ndarray:
        """
        ``_interval_basin[i]`` is the basin between saddles ``i - 1`` and ``i``
        (circularly).
        """
        _saddles = self._saddle_angles
        _basins = np.full(max(_saddles.size, 1), BasinLabel.SADDLE_INDEX, dtype=int)

        for _index, _minimum in enumerate(self.minima):
            if _saddles.size:
                _basins[np.searchsorted(_saddles, _minimum.angle) % _saddles.size] = (
                    _index
                )
            else:
                _basins[0] = _index

        return _basins

    def _neighbour_saddles(self, basin: BasinLabel) -> List[CriticalPoint]:
        _critical = list(self.critical)
        _position = _critical.index(self.minima[basin.index])

        return [
            _critical[(_position + step) % len(_critical)]
            for step in (-1, 1)
            if not _critical[(_position + step) % len(_critical)].is_min
        ]

    def exit_saddle(self, basin: BasinLabel) -> Optional[CriticalPoint]:
        """
        The lowest saddle bounding ``basin``, or ``None`` on a single-basin landscape.
        """
        _saddles = self._neighbour_saddles(basin)

        if not _saddles:
            return None

        return min(_saddles, key=lambda saddle: saddle.value)

    def exit_barrier(self, basin: BasinLabel) -> float:
        """
        Height of the lowest saddle bounding ``basin`` above its minimum: the cost of
        leaving it toward any neighbour.
        """
        _saddle = self.exit_saddle(basin)

        if _saddle is None:
            return math.inf

        return _saddle.value - self.minima[basin.index].value

    @cached_property
    def barriers(self) -> BarrierReport:
        """
        Escape cost of every suboptimal basin: the lower, over the two directions
        around the circle, of the highest saddle met before reaching a global basin,
        minus the basin's minimum.

        Without a suboptimal basin, every basin of a multi-basin landscape reports
        its exit barrier instead.
        """
        _critical = list(self.critical)
        _count = len(_critical)
        _barriers = []

        for _index, _minimum in enumerate(self.minima):
            _label = BasinLabel(_index)
            if self.is_global(_label):
                continue

            _position = _critical.index(_minimum)
            _best: Optional[CriticalPoint] = None
            for _direction in (-1, 1):
                _highest: Optional[CriticalPoint] = None
                for _step in range(1, _count):
                    _point = _critical[(_position + _direction * _step) % _count]
                    if _point.is_min:
                        if _point.value <= self.global_value + GLOBAL_TOLERANCE:
                            break
                        continue
                    if _highest is None or _point.value > _highest.value:
                        _highest = _point
                if _highest is not None and (
                    _best is None or _highest.value < _best.value
                ):
                    _best = _highest

            _barriers.append(
                BasinBarrier(
                    basin=_label,
                    minimum=_minimum,
                    saddle=_best,
                    delta_e=_best.value - _minimum.value,
                )
            )

        # Equivalent global wells still trap the dynamics for e^(beta dE) between
        # exchanges.
        if not _barriers and len(self.minima) > 1:
            for _index, _minimum in enumerate(self.minima):
                _label = BasinLabel(_index)
                _barriers.append(
                    BasinBarrier(
                        basin=_label,
                        minimum=_minimum,
                        saddle=self.exit_saddle(_label),
                        delta_e=self.exit_barrier(_label),
                        suboptimal=False,
                    )
                )

        _delta_e_max = max((barrier.delta_e for barrier in _barriers), default=0.0)
        _critical_rate = CriticalRate.from_barrier(_delta_e_max)

        return BarrierReport(
            barriers=tuple(_barriers),
            delta_e_max=_delta_e_max,
            c_star=_critical_rate.c_star,
        )

    def basin_indices(self, theta: np.ndarray) -> np.ndarray:
        """
        Vectorised :func:`basin_of`: basin indices of many angles, with
        :attr:`BasinLabel.SADDLE_INDEX` on saddles.
        """
        _theta = wrap_angle(np.asarray(theta, dtype=float))
        _saddles = self._saddle_angles

        if not _saddles.size:
            return np.full(np.shape(_theta), self._interval_basin[0], dtype=int)

        _labels = self._interval_basin[
            np.searchsorted(_saddles, _theta) % _saddles.size
        ]

        _distance = np.abs(
            wrap_angle(np.asarray(_theta)[..., None] - _saddles)
        ).min(axis=-1)

        return np.where(_distance <= SADDLE_TOLERANCE, BasinLabel.SADDLE_INDEX, _labels)


@dataclass(frozen=True)
class SymmetricDoubleWell(LandscapeSpec):
    """
    :math:`U(\\theta) = \\cos 2\\theta`: minima at :math:`\\pm\\pi/2` with
    :math:`U = -1`, saddles at 0 and :math:`\\pi` with :math:`U = 1`.
    """

    family: ClassVar[str] = "symmetric-double-well"

    def value(self, theta):
        return np.cos(2.0 * np.asarray(theta, dtype=float))

    def derivative(self, theta):
        return -2.0 * np.sin(2.0 * np.asarray(theta, dtype=float))

    def second_derivative(self, theta):
        return -4.0 * np.cos(2.0 * np.asarray(theta, dtype=float))

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family}


@dataclass(frozen=True)
class TiltedDoubleWell(LandscapeSpec):
    """
    :math:`U(\\theta) = \\cos 2\\theta + \\gamma \\sin \\theta`.

    The tilt deepens the well at :math:`-\\pi/2` to :math:`-1 - \\gamma` and lifts
    the one at :math:`+\\pi/2` to :math:`-1 + \\gamma`; the saddles move to
    :math:`\\sin \\theta = \\gamma / 4`.

    Parameters
    ----------
    gamma : float
        Tilt, in ``(0, 0.5)``.
    """

    family: ClassVar[str] = "tilted-double-well"

    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 0.5:
            raise InvalidInstance(
                f"The tilt gamma must lie in (0, 0.5); got {self.gamma!r}."
            )

    def value(self, theta):
        _theta = np.asarray(theta, dtype=float)

        return np.cos(2.0 * _theta) + self.gamma * np.sin(_theta)

    def derivative(self, theta):
        _theta = np.asarray(theta, dtype=float)

        return -2.0 * np.sin(2.0 * _theta) + self.gamma * np.cos(_theta)

    def second_derivative(self, theta):
        _theta = np.asarray(theta, dtype=float)

        return -4.0 * np.cos(2.0 * _theta) - self.gamma * np.sin(_theta)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "gamma": self.gamma}


@dataclass(frozen=True)
class InfoNCEMicro(LandscapeSpec):
    """
    A one-dimensional slice of a planar InfoNCE instance.

    Embedding ``moving`` is placed at angle :math:`\\theta`; every other embedding
    stays at its angle in ``angles``. The slice value is the limiting potential
    :math:`U_0`, or the scaled loss :math:`\\mathcal{L} / \\beta` when ``beta`` is
    given.

    :math:`U_0` slices have kinks and plateaus, so critical points are located by a
    scan of values rather than of derivatives, and derivatives are central
    differences.

    Parameters
    ----------
    angles : Tuple[float, ...]
        Angles of all ``n >= 3`` embeddings; the entry of ``moving`` is ignored.

    moving : int
        Index of the embedding that moves.

    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        Positive pairs over the ``n`` embeddings.

    beta : float | None
        ``None`` for the limiting potential, otherwise the inverse temperature of the
        scaled loss.
    """

    family: ClassVar[str] = "infonce-micro"

    angles: Tuple[float, ...]
    moving: int
    kind: SimilarityKind
    pairs: PairSet
    beta: Optional[float] = None

    _base: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    CHUNK: ClassVar[int] = 8192
    DERIVATIVE_STEP: ClassVar[float] = 1e-6
    CURVATURE_STEP: ClassVar[float] = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))

        if len(self.angles) < 3:
            raise InvalidInstance(
                f"A micro landscape needs n >= 3 embeddings; got {len(self.angles)}."
            )

        if self.pairs.n != len(self.angles):
            raise InvalidInstance(
                f"The pair set is defined on {self.pairs.n} points but "
                f"{len(self.angles)} angles were given."
            )

        if not 0 <= self.moving < len(self.angles):
            raise InvalidInstance(
                f"Moving index {self.moving} is outside [0, {len(self.angles)})."
            )

        if self.beta is not None and not self.beta > 0:
            raise InvalidInstance(f"beta must be > 0 or None; got {self.beta!r}.")

        _base = Configuration.from_angles(self.angles).points.copy()
        _base.setflags(write=False)
        object.__setattr__(self, "_base", _base)

    @property
    def smooth(self) -> bool:
        return self.beta is not None

    def configuration(self, theta: float) -> Configuration:
        """
        The full configuration with the moving embedding at ``theta``.
        """
        _points = self._base.copy()
        _points[self.moving] = (math.cos(theta), math.sin(theta))

        return Configuration(_points)

    def _evaluate(self, theta: np.ndarray) -> np.ndarray:
        _points = np.repeat(self._base[None, :, :], theta.size, axis=0)
        _points[:, self.moving, 0] = np.cos(theta)
        _points[:, self.moving, 1] = np.sin(theta)

        if self.beta is None:
            return limiting_potential(_points, self.kind, self.pairs)

        return infonce_loss(_points, self.beta, self.kind, self.pairs) / self.beta

    def value(self, theta):
        _theta = np.asarray(theta, dtype=float)
        _flat = _theta.reshape(-1)

        _values = np.concatenate(
            [
                self._evaluate(_flat[start : start + self.CHUNK])
                for start in range(0, max(_flat.size, 1), self.CHUNK)
            ]
        )[: _flat.size]

        if _theta.ndim == 0:
            return float(_values[0])

        return _values.reshape(_theta.shape)

    def derivative(self, theta):
        _theta = np.asarray(theta, dtype=float)
        _h = self.DERIVATIVE_STEP

        return (self.value(_theta + _h) - self.value(_theta - _h)) / (2.0 * _h)

    def second_derivative(self, theta):
        _theta = np.asarray(theta, dtype=float)
        _h = self.CURVATURE_STEP

        return (
            self.value(_theta + _h) - 2.0 * self.value(_theta) + self.value(_theta - _h)
        ) / _h**2

    def _locate_critical_points(self) -> List[CriticalPoint]:
        """
        Extrema of a circular scan of values, with plateaus collapsed to their
        midpoint and isolated extrema refined by a bounded scalar minimiser.
        """
        _h = 2.0 * math.pi / GRID_POINTS
        _grid = -math.pi + _h * np.arange(GRID_POINTS)
        _values = self.value(_grid)

        _changes = np.nonzero(
            np.abs(np.diff(np.append(_values, _values[0]))) > PLATEAU_TOLERANCE
        )[0]
        if not _changes.size:
            raise DegenerateCritical(f"{self!r} is flat; it has no basin structure.")

        # Roll so that index 0 starts a run of equal values.
        _offset = int(_changes[0] + 1) % GRID_POINTS
        _rolled = np.roll(_values, -_offset)
        _starts = np.concatenate(
            [[0], np.nonzero(np.abs(np.diff(_rolled)) > PLATEAU_TOLERANCE)[0] + 1]
        )
        _lengths = np.diff(np.append(_starts, GRID_POINTS))
        _levels = _rolled[_starts]

        _points = []
        for _run in range(_starts.size):
            _previous = _levels[_run - 1]
            _next = _levels[(_run + 1) % _starts.size]
            _level = _levels[_run]

            if _level < _previous and _level < _next:
                _type = CriticalType.MIN
            elif _level > _previous and _level > _next:
                _type = CriticalType.SADDLE
            else:
                continue

            _centre = -math.pi + _h * (
                _offset + _starts[_run] + (_lengths[_run] - 1) / 2.0
            )
            _angle, _value = wrap_angle(_centre), float(_level)

            if _lengths[_run] == 1:
                _angle, _value = self._refine(_angle, _value, _type, _h)

            _points.append(
                CriticalPoint(
                    angle=_angle,
                    value=_value,
                    type=_type,
                    curvature=float(self.second_derivative(_angle)),
                )
            )

        return _points

    def _refine(
        self, angle: float, value: float, type: CriticalType, h: float
    ) -> Tuple[float, float]:
        _sign = 1.0 if type is CriticalType.MIN else -1.0
        _result = minimize_scalar(
            lambda theta: _sign * self.value(theta),
            bounds=(angle - h, angle + h),
            method="bounded",
            options={"xatol": ROOT_TOLERANCE},
        )

        if _sign * _result.fun < _sign * value:
            return wrap_angle(float(_result.x)), float(_sign * _result.fun)

        return angle, value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "angles": list(self.angles),
            "moving": self.moving,
            "kind": self.kind.to_dict(),
            "pairs": [list(pair) for pair in self.pairs.pairs],
            "beta": self.beta,
        }


LANDSCAPE_FAMILIES: Tuple[str, ...] = (
    SymmetricDoubleWell.family,
    TiltedDoubleWell.family,
    InfoNCEMicro.family,
)


# ======================================================================================
# Operations


def landscape_eval(spec: LandscapeSpec, theta: float) -> Tuple[float, float, float]:
    """
    :math:`(U, U', U'')` at ``theta``.
    """
    return (
        float(spec.value(theta)),
        float(spec.derivative(theta)),
        float(spec.second_derivative(theta)),
    )


def critical_points(spec: LandscapeSpec) -> List[CriticalPoint]:
    """
    All critical points of ``spec`` in ``[-pi, pi)``, sorted by angle.

    Raises
    ------
    DegenerateCritical
        If a critical point of a smooth landscape has ``|U''| < 1e-8``, or a micro
        landscape is flat.
    """
    return list(spec.critical)


def barrier_heights(spec: LandscapeSpec) -> BarrierReport:
    """
    Per-basin escape costs, their maximum :math:`\\Delta E_{max}` and
    :math:`c^* = 1 / \\Delta E_{max}`.

    When every minimum is global but there are several of them (the symmetric double
    well), each basin reports its exit barrier toward a neighbour instead, flagged
    ``suboptimal=False``. A single-basin landscape reports no barrier,
    ``delta_e_max = 0`` and ``c_star = inf``.
    """
    return spec.barriers


def kramers_prefactor(spec: LandscapeSpec, basin: BasinLabel) -> float:
    """
    Eyring-Kramers prefactor of leaving ``basin`` over its lowest saddle.

    In one dimension :math:`A = \\sqrt{U''(min) |U''(saddle)|} / (2\\pi)`.

    Raises
    ------
    DegenerateCritical
        If the landscape is not smooth, has no saddle, or either curvature is below
        ``1e-8`` in magnitude.
    """
    if not spec.smooth:
        raise DegenerateCritical(
            f"{spec!r} is not twice differentiable; the Eyring-Kramers prefactor "
            f"does not apply."
        )

    if basin.is_saddle:
        raise DegenerateCritical("A saddle has no Eyring-Kramers prefactor.")

    _minimum = spec.minima[basin.index]
    _saddle = spec.exit_saddle(basin)

    if _saddle is None:
        raise DegenerateCritical(f"{basin} of {spec!r} is the only basin.")

    if min(abs(_minimum.curvature), abs(_saddle.curvature)) < DEGENERATE_CURVATURE:
        raise DegenerateCritical(
            f"Degenerate curvature at the minimum ({_minimum.curvature:.3e}) or the "
            f"saddle ({_saddle.curvature:.3e})."
        )

    return math.sqrt(_minimum.curvature * abs(_saddle.curvature)) / (2.0 * math.pi)


def escape_prefactor(spec: LandscapeSpec, basin: BasinLabel) -> float:
    """
    Total Eyring-Kramers prefactor of leaving ``basin``: the sum of the prefactors of
    every bounding saddle at the exit barrier height.

    A well bounded by two equal saddles (both wells of
    :class:`SymmetricDoubleWell`) escapes twice as fast as over one of them, so the
    mean exit time is :math:`e^{\\beta \\Delta E} / (2A)`.

    Raises
    ------
    DegenerateCritical
        As :func:`kramers_prefactor`.
    """
    _lowest = kramers_prefactor(spec, basin)
    _minimum = spec.minima[basin.index]
    _height = spec.exit_saddle(basin).value

    _channels = [
        saddle
        for saddle in {
            (point.angle, point.value, point.curvature): point
            for point in spec._neighbour_saddles(basin)
        }.values()
        if saddle.value <= _height + GLOBAL_TOLERANCE
    ]

    if len(_channels) < 2:
        return _lowest

    return sum(
        math.sqrt(_minimum.curvature * abs(saddle.curvature)) / (2.0 * math.pi)
        for saddle in _channels
    )


def basin_of(spec: LandscapeSpec, theta: float) -> BasinLabel:
    """
    The basin containing ``theta``: the minimum between the two saddles around it,
    or :meth:`BasinLabel.saddle` within ``1e-10`` of a saddle.
    """
    return BasinLabel(int(spec.basin_indices(np.asarray([theta]))[0]))


def basin_indices(spec: LandscapeSpec, theta: np.ndarray) -> np.ndarray:
    """
    Vectorised :func:`basin_of`.
    """
    return spec.basin_indices(theta)


def global_basins(spec: LandscapeSpec) -> List[BasinLabel]:
    """
    Basins whose minimum is a global minimum.
    """
    return [
        BasinLabel(index)
        for index in range(len(spec.minima))
        if spec.is_global(BasinLabel(index))
    ]


def global_basin(spec: LandscapeSpec) -> BasinLabel:
    """
    The first global basin, by angle.
    """
    return global_basins(spec)[0]


def deepest_suboptimal_basin(spec: LandscapeSpec) -> BasinLabel:
    """
    The suboptimal basin with the largest escape cost.

    Raises
    ------
    NotSuboptimal
        If every basin is global.
    """
    _barriers = spec.barriers.suboptimal

    if not _barriers:
        raise NotSuboptimal(f"{spec!r} has no suboptimal basin.")

    return max(_barriers, key=lambda barrier: barrier.delta_e).basin


def build_infonce_micro(
    angles: Sequence[float],
    kind: SimilarityKind,
    pairs: PairSet,
    anchor_slice: int,
    *,
    beta: Optional[float] = None,
) -> InfoNCEMicro:
    """
    Slice a planar InfoNCE instance along one embedding.

    Parameters
    ----------
    angles : Sequence[float]
        Angles of the ``n >= 3`` embeddings; the entry at ``anchor_slice`` is ignored.

    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        Positive pairs over the ``n`` embeddings.

    anchor_slice : int
        The embedding placed at angle :math:`\\theta`.

    beta : float | None
        ``None`` slices the limiting potential, otherwise the scaled loss.

    Returns
    -------
    InfoNCEMicro
        The slice, with its critical structure already located.

    Raises
    ------
    DegenerateCritical
        If the slice is flat.
    """
    _spec = InfoNCEMicro(
        angles=tuple(angles), moving=anchor_slice, kind=kind, pairs=pairs, beta=beta
    )

    # Trigger the scan now, so a flat slice is reported at construction.
    _spec.critical

    return _spec


def landscape_from_dict(spec: Dict[str, Any]) -> LandscapeSpec:
    """
    Inverse of :meth:`LandscapeSpec.to_dict`.
    """
    _family = spec.get("family")

    if _family == SymmetricDoubleWell.family:
        return SymmetricDoubleWell()

    if _family == TiltedDoubleWell.family:
        return TiltedDoubleWell(gamma=float(spec["gamma"]))

    if _family == InfoNCEMicro.family:
        _angles = [float(angle) for angle in spec["angles"]]
        return build_infonce_micro(
            _angles,
            similarity_from_dict(spec.get("kind", {"name": "cosine"})),
            PairSet.of(len(_angles), spec["pairs"]),
            int(spec.get("moving", 0)),
            beta=spec.get("beta"),
        )

    raise InvalidInstance(
        f"Unknown landscape family {_family!r}; expected one of {LANDSCAPE_FAMILIES}."
    )


# ======================================================================================
# Driving the integrator on a landscape


def landscape_configuration(theta: float) -> Configuration:
    """
    The two-point configuration representing angle ``theta``: the moving point at
    ``theta`` and the frozen reference at angle 0.
    """
    return Configuration.from_angles([theta, 0.0])


def configuration_angle(points: np.ndarray) -> np.ndarray:
    """
    Angle of the moving point relative to the reference, in ``[-pi, pi)``; vectorised
    over leading axes of ``(..., 2, 2)`` arrays.
    """
    _points = np.asarray(points.points if isinstance(points, Configuration) else points)
    _moving, _reference = _points[..., 0, :], _points[..., 1, :]
    _cross = _reference[..., 0] * _moving[..., 1] - _reference[..., 1] * _moving[..., 0]
    _dot = _reference[..., 0] * _moving[..., 0] + _reference[..., 1] * _moving[..., 1]

    return wrap_angle(np.arctan2(_cross, _dot))


class LandscapePotential(Potential):
    """
    A landscape as a Langevin potential on two-point planar configurations.

    The gradient of the moving point is :math:`U'(\\theta)` along the tangent
    direction; the reference point is frozen.
    """

    def __init__(self, spec: LandscapeSpec):
        self.spec = spec
        self.n = 2
        self.frozen = np.array([False, True])

    def loss(self, points: np.ndarray, beta: float) -> np.ndarray:
        return self.spec.value(configuration_angle(points))

    def limiting(self, points: np.ndarray) -> np.ndarray:
        return self.spec.value(configuration_angle(points))

    def euclidean_gradient(self, points: np.ndarray, beta: float) -> np.ndarray:
        _moving = points[..., 0, :]
        _slope = self.spec.derivative(configuration_angle(points))
        _radius2 = np.sum(_moving * _moving, axis=-1)

        _grad = np.zeros_like(points)
        _grad[..., 0, 0] = -_slope * _moving[..., 1] / _radius2
        _grad[..., 0, 1] = _slope * _moving[..., 0] / _radius2

        return _grad

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"



def angle_init(theta: float) -> InitialCondition:
    """
    Every chain starts at ``theta``.
    """
    _points = landscape_configuration(theta).points

    def _init(chain: int, chains: int, rng: np.random.Generator) -> np.ndarray:
        return _points.copy()

    return _init


def uniform_angle_init() -> InitialCondition:
    """
    Every chain starts at an independent uniform angle.
    """

    def _init(chain: int, chains: int, rng: np.random.Generator) -> np.ndarray:
        return landscape_configuration(rng.uniform(-math.pi, math.pi)).points

    return _init


def stratified_angle_init() -> InitialCondition:
    """
    Chain ``i`` of ``m`` starts uniformly inside the ``i``-th of ``m`` equal arcs.

    The ensemble then covers the circle evenly, which removes the sampling noise of
    the initial basin split.

    Unlike the other initial conditions, a chain's start depends on the ensemble
    size as well as on its own stream: chain ``i`` is reproducible from the master
    seed, ``i`` and ``m`` together, and the same chain of a larger ensemble starts
    in a narrower arc.
    """

    def _init(chain: int, chains: int, rng: np.random.Generator) -> np.ndarray:
        _theta = -math.pi + 2.0 * math.pi * (chain + rng.uniform()) / chains

        return landscape_configuration(_theta).points

    return _init
