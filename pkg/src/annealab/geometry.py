# -*- coding: utf-8 -*-
"""
================================
 Product sphere geometry
================================

The state space of the dynamics is the product of ``N`` unit spheres
:math:`(S^{d-1})^N`. This module holds the point types and the few operations the
integrator needs on it: projection, tangent projection, the projection retraction,
geodesic distance and tangent Gaussian noise.

Every operation has an array-level counterpart (suffix ``_rows``) acting on the last
axis of stacked arrays of shape ``(..., N, d)``; the integrator uses those on whole
blocks of chains at once.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .exceptions import DimensionMismatch, InvalidConfiguration, ZeroVector

logger = logging.getLogger(__name__)

UNIT_TOLERANCE: float = 1e-12
"""
Maximum deviation of a point's norm from 1.
"""

TANGENT_TOLERANCE: float = 1e-10
"""
Maximum inner product magnitude between a tangent vector and its base point, relative
to the larger of 1 and the vector's norm.
"""

ZERO_NORM: float = 1e-300
"""
Norms below this value cannot be normalised.
"""

RETRACT_TANGENT_TOLERANCE: float = 1e-8


def _as_vector(value: Union["UnitVector", Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(value, UnitVector):
        return value.coords

    return np.asarray(value, dtype=float)


@dataclass(frozen=True, eq=False)
class UnitVector:
    """
    A point on :math:`S^{d-1}`, ``d >= 2``.

    Parameters
    ----------
    coords : numpy.ndarray
        Coordinates of length ``d``; the norm must equal 1 within
        :data:`UNIT_TOLERANCE`. Use :func:`project_to_sphere` to build one from an
        arbitrary nonzero vector.
    """

    coords: np.ndarray

    def __post_init__(self):
        _coords = np.array(self.coords, dtype=float)
        _coords.setflags(write=False)

        if _coords.ndim != 1 or _coords.size < 2:
            raise InvalidConfiguration(
                f"A unit vector needs d >= 2 coordinates; got shape {_coords.shape}."
            )

        _norm = float(np.linalg.norm(_coords))
        if abs(_norm - 1.0) > UNIT_TOLERANCE:
            raise InvalidConfiguration(
                f"A unit vector must have norm 1 within {UNIT_TOLERANCE:g}; "
                f"got norm {_norm!r}."
            )

        object.__setattr__(self, "coords", _coords)

    @property
    def d(self) -> int:
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnitVector):
            return NotImplemented

        return bool(np.array_equal(self.coords, other.coords))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.coords.tolist()!r})"


@dataclass(frozen=True, eq=False)
class Configuration:
    """
    An ordered list of ``N >= 2`` points on a common sphere :math:`S^{d-1}`.

    Parameters
    ----------
    points : numpy.ndarray
        Array of shape ``(N, d)`` whose rows are unit vectors.

    Examples
    --------
    Planar configurations are most easily built from angles::

        >>> Configuration.from_angles([0.0, np.pi / 2]).points.round(12)
        array([[1., 0.],
               [0., 1.]])
    """

    points: np.ndarray

    def __post_init__(self):
        _points = np.array(self.points, dtype=float)

        if _points.ndim != 2:
            raise InvalidConfiguration(
                f"A configuration is an (N, d) array; got shape {_points.shape}."
            )

        _n, _d = _points.shape
        if _n < 2:
            raise InvalidConfiguration(
                f"A configuration needs N >= 2 points (one anchor and one candidate); "
                f"got N={_n}."
            )

        if _d < 2:
            raise InvalidConfiguration(
                f"Points of a configuration need d >= 2 coordinates; got d={_d}."
            )

        _deviation = np.abs(np.linalg.norm(_points, axis=-1) - 1.0)
        if np.any(_deviation > UNIT_TOLERANCE) or not np.all(np.isfinite(_points)):
            _worst = int(np.argmax(_deviation))
            raise InvalidConfiguration(
                f"Point {_worst} of the configuration is not a unit vector; its norm "
                f"deviates from 1 by {_deviation[_worst]:.3e}."
            )

        _points.setflags(write=False)
        object.__setattr__(self, "points", _points)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[float]]) -> "Configuration":
        """
        Build a configuration by normalising arbitrary nonzero vectors.
        """
        return cls(normalize_rows(np.asarray(vectors, dtype=float)))

    @classmethod
    def from_angles(cls, angles: Sequence[float]) -> "Configuration":
        """
        Build a planar (``d = 2``) configuration from angles in radians.
        """
        _angles = np.asarray(angles, dtype=float)

        return cls(np.stack([np.cos(_angles), np.sin(_angles)], axis=-1))

    def angles(self) -> np.ndarray:
        """
        Angles in ``[-pi, pi)`` of the points of a planar configuration.
        """
        if self.d != 2:
            raise DimensionMismatch(
                f"Angles are only defined for d = 2 configurations; this one has "
                f"d={self.d}."
            )

        return wrap_angle(np.arctan2(self.points[:, 1], self.points[:, 0]))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index: int) -> UnitVector:
        return UnitVector(self.points[index])

    def __iter__(self) -> Iterator[UnitVector]:
        for _row in self.points:
            yield UnitVector(_row)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented

        return bool(np.array_equal(self.points, other.points))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """
    Per-point tangent vectors attached to a base :class:`Configuration`.

    Parameters
    ----------
    base : Configuration
        The configuration the vectors are tangent to.

    vectors : numpy.ndarray
        Array of shape ``(N, d)``; row ``i`` is orthogonal to ``base.points[i]``.
    """

    base: Configuration
    vectors: np.ndarray

    def __post_init__(self):
        _vectors = np.array(self.vectors, dtype=float)

        if _vectors.shape != self.base.points.shape:
            raise DimensionMismatch(
                f"Tangent vectors of shape {_vectors.shape} do not match their base "
                f"configuration of shape {self.base.points.shape}."
            )

        _inner = np.abs(np.sum(_vectors * self.base.points, axis=-1))
        _scale = np.maximum(np.linalg.norm(_vectors, axis=-1), 1.0)
        if np.any(_inner > TANGENT_TOLERANCE * _scale):
            _worst = int(np.argmax(_inner / _scale))
            raise InvalidConfiguration(
                f"Vector {_worst} is not tangent to its base point; inner product "
                f"{_inner[_worst]:.3e}."
            )

        _vectors.setflags(write=False)
        object.__setattr__(self, "vectors", _vectors)

    def norms(self) -> np.ndarray:
        """
        Per-point Euclidean norms.
        """
        return np.linalg.norm(self.vectors, axis=-1)


# ======================================================================================
# Array level operations.


def wrap_angle(theta: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Wrap angles into ``[-pi, pi)``.
    """
    _wrapped = np.mod(np.asarray(theta, dtype=float) + np.pi, 2.0 * np.pi) - np.pi

    if np.ndim(_wrapped) == 0:
        return float(_wrapped)

    return _wrapped


def normalize_rows(vectors: np.ndarray) -> np.ndarray:
    """
    Normalise the last axis of ``vectors``.

    Raises
    ------
    ZeroVector
        If any row has norm below :data:`ZERO_NORM`.
    """
    _norms = np.linalg.norm(vectors, axis=-1, keepdims=True)

    if np.any(_norms < ZERO_NORM):
        raise ZeroVector("Cannot project a zero vector onto the sphere.")

    return vectors / _norms


def tangent_project_rows(points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Remove the radial component of ``vectors`` along ``points``, row by row.
    """
    return vectors - np.sum(vectors * points, axis=-1, keepdims=True) * points


# ======================================================================================
# Point level operations.


def project_to_sphere(v: Union[Sequence[float], np.ndarray]) -> UnitVector:
    """
    Normalise a nonzero vector onto the unit sphere.

    Parameters
    ----------
    v : Sequence[float] | numpy.ndarray
        Vector of length ``d >= 2``.

    Returns
    -------
    UnitVector
        ``v / |v|``; unit input is returned unchanged up to rounding.

    Raises
    ------
    ZeroVector
        If ``|v| < 1e-300``.
    """
    _v = _as_vector(v)
    _norm = float(np.linalg.norm(_v))

    if _norm < ZERO_NORM:
        raise ZeroVector(f"Cannot project a vector of norm {_norm!r} onto the sphere.")

    return UnitVector(_v / _norm)


def tangent_project(
    z: Union[UnitVector, np.ndarray], g: Union[Sequence[float], np.ndarray]
) -> np.ndarray:
    """
    Project ``g`` onto the tangent plane of the sphere at ``z``: ``g - (g.z) z``.

    This turns a Euclidean gradient into the Riemannian gradient on the sphere.
    """
    _z = _as_vector(z)
    _g = _as_vector(g)

    if _z.shape != _g.shape:
        raise DimensionMismatch(
            f"Cannot project a vector of shape {_g.shape} onto the tangent plane of a "
            f"point of shape {_z.shape}."
        )

    return _g - float(np.sum(_g * _z)) * _z


def retract(z: UnitVector, step: Union[Sequence[float], np.ndarray]) -> UnitVector:
    """
    Projection retraction: move along a tangent ``step`` and renormalise.

    Parameters
    ----------
    z : UnitVector
        Base point.

    step : Sequence[float] | numpy.ndarray
        Tangent vector at ``z``.

    Returns
    -------
    UnitVector
        ``(z + step) / |z + step|``, or ``z`` itself if ``step`` is zero.

    Raises
    ------
    InvalidConfiguration
        If ``step`` is not tangent to ``z`` within ``1e-8``.

    ZeroVector
        If ``z + step`` vanishes.
    """
    _step = _as_vector(step)

    if _step.shape != z.coords.shape:
        raise DimensionMismatch(
            f"Step of shape {_step.shape} does not match point of shape "
            f"{z.coords.shape}."
        )

    if not np.any(_step):
        return z

    _inner = abs(float(np.sum(_step * z.coords)))
    if _inner > RETRACT_TANGENT_TOLERANCE * max(1.0, float(np.linalg.norm(_step))):
        raise InvalidConfiguration(
            f"Retraction step is not tangent to its base point; inner product "
            f"{_inner:.3e}."
        )

    return project_to_sphere(z.coords + _step)


def geodesic_distance(a: UnitVector, b: UnitVector) -> float:
    """
    Great-circle distance between two points, in ``[0, pi]``.

    Evaluated as ``2 atan2(|a - b|, |a + b|)``, which equals
    ``arccos(clamp(a.b, -1, 1))`` but stays exact for coincident and antipodal
    points.

    Raises
    ------
    DimensionMismatch
        If ``a`` and ``b`` live on spheres of different dimension.
    """
    _a, _b = _as_vector(a), _as_vector(b)

    if _a.shape != _b.shape:
        raise DimensionMismatch(
            f"Cannot measure the distance between points of dimension {_a.size} and "
            f"{_b.size}."
        )

    return float(
        2.0 * np.arctan2(np.linalg.norm(_a - _b), np.linalg.norm(_a + _b))
    )


def geodesic_distance_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Row-wise :func:`geodesic_distance` over the last axis.
    """
    return 2.0 * np.arctan2(
        np.linalg.norm(a - b, axis=-1), np.linalg.norm(a + b, axis=-1)
    )


def sample_uniform_configuration(
    n: int, d: int, rng: np.random.Generator
) -> Configuration:
    """
    Draw ``n`` independent uniform points on :math:`S^{d-1}`.

    Each point is an isotropic Gaussian vector, normalised.

    Raises
    ------
    InvalidConfiguration
        If ``n < 2`` or ``d < 2``.
    """
    if n < 2 or d < 2:
        raise InvalidConfiguration(
            f"Uniform configurations need n >= 2 and d >= 2; got n={n}, d={d}."
        )

    return Configuration(normalize_rows(rng.standard_normal((n, d))))


def sample_tangent_gaussian(z: Configuration, rng: np.random.Generator) -> TangentVector:
    """
    Draw a standard Gaussian in the tangent space of every point of ``z``.

    The ambient Gaussian is tangent-projected per point; points receive independent
    draws.
    """
    _xi = rng.standard_normal(z.points.shape)

    return TangentVector(z, tangent_project_rows(z.points, _xi))
