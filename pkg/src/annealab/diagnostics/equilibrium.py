# -*- coding: utf-8 -*-
"""
Fixed-temperature equilibrium on the circle: the Gibbs reference
:math:`\\propto e^{-\\beta U(\\theta)}` binned over ``[-pi, pi)``, empirical occupation
histograms of the integrator, and their total-variation distance.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from ..dynamics import IntegratorConfig, advance
from ..dynamics.ensemble import InitialCondition
from ..exceptions import DimensionMismatch, InvalidInstance
from ..landscapes import (
    LandscapePotential,
    LandscapeSpec,
    configuration_angle,
    stratified_angle_init,
)
from ..schedules import Constant
from ..utils.seeding import chain_streams

logger = logging.getLogger(__name__)

MIN_BINS: int = 8
MIN_GRID: int = 256

BURN_IN: float = 0.1
"""
Fraction of each chain's steps discarded before histogramming.
"""


@dataclass(frozen=True)
class AngularHistogram:
    """
    Occupation counts over ``bins`` equal arcs of ``[-pi, pi)``.
    """

    counts: np.ndarray

    def __post_init__(self):
        _counts = np.asarray(self.counts, dtype=np.int64)

        if _counts.ndim != 1 or _counts.size < MIN_BINS:
            raise InvalidInstance(
                f"An angular histogram needs at least {MIN_BINS} bins; "
                f"got shape {_counts.shape}."
            )

        if np.any(_counts < 0):
            raise InvalidInstance("Histogram counts must be non-negative.")

        _counts.setflags(write=False)
        object.__setattr__(self, "counts", _counts)

    @classmethod
    def empty(cls, bins: int) -> "AngularHistogram":
        return cls(np.zeros(bins, dtype=np.int64))

    @classmethod
    def from_angles(cls, angles: np.ndarray, bins: int = 64) -> "AngularHistogram":
        return cls(np.bincount(bin_index(angles, bins), minlength=bins))

    @property
    def bins(self) -> int:
        return self.counts.size

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return bin_centers(self.bins)

    @property
    def frequencies(self) -> np.ndarray:
        if not self.total:
            return np.zeros(self.bins)

        return self.counts / self.total

    def __add__(self, other: "AngularHistogram") -> "AngularHistogram":
        if other.bins != self.bins:
            raise DimensionMismatch(
                f"Cannot add histograms with {self.bins} and {other.bins} bins."
            )

        return AngularHistogram(self.counts + other.counts)


def bin_index(angles: np.ndarray, bins: int) -> np.ndarray:
    """
    Bin of each angle in ``[-pi, pi)``.
    """
    _index = np.floor(
        (np.asarray(angles, dtype=float).ravel() + math.pi) / (2.0 * math.pi) * bins
    ).astype(int)

    return np.clip(_index, 0, bins - 1)


def bin_centers(bins: int) -> np.ndarray:
    return -math.pi + (np.arange(bins) + 0.5) * (2.0 * math.pi / bins)


def gibbs_reference_density(
    spec: LandscapeSpec, beta: float, bins: int = 64, grid: int = 32768
) -> np.ndarray:
    """
    Gibbs probability mass of each bin, by trapezoid quadrature of
    :math:`e^{-\\beta (U - U_{min})}` on ``grid`` cells.

    Parameters
    ----------
    spec : LandscapeSpec
        The potential.

    beta : float
        Inverse temperature, ``> 0``.

    bins : int
        Number of equal arcs, ``>= 8``.

    grid : int
        Total number of quadrature cells, ``>= 256``; rounded up to a multiple of
        ``bins``.

    Returns
    -------
    numpy.ndarray
        ``bins`` probabilities summing to 1.
    """
    if not beta > 0:
        raise InvalidInstance(f"beta must be > 0; got {beta!r}.")

    if bins < MIN_BINS or grid < MIN_GRID:
        raise InvalidInstance(
            f"Need bins >= {MIN_BINS} and grid >= {MIN_GRID}; "
            f"got bins={bins}, grid={grid}."
        )

    _cells = max(-(-grid // bins), 1)
    _width = 2.0 * math.pi / bins
    _theta = (
        -math.pi
        + _width * np.arange(bins)[:, None]
        + np.linspace(0.0, _width, _cells + 1)[None, :]
    )

    _energy = spec.value(_theta)
    _weights = np.exp(-beta * (_energy - np.min(_energy)))
    _mass = trapezoid(_weights, dx=_width / _cells, axis=-1)

    return _mass / _mass.sum()


def total_variation(h: AngularHistogram, ref: np.ndarray) -> float:
    """
    :math:`\\frac{1}{2} \\sum_b |f_b - p_b|` between the empirical frequencies of ``h``
    and the reference probabilities ``ref``.

    Raises
    ------
    DimensionMismatch
        If the bin counts differ.
    """
    _ref = np.asarray(ref, dtype=float)

    if _ref.shape != (h.bins,):
        raise DimensionMismatch(
            f"The histogram has {h.bins} bins but the reference has shape "
            f"{_ref.shape}."
        )

    return float(min(0.5 * np.sum(np.abs(h.frequencies - _ref)), 1.0))


def equilibrium_histogram(
    spec: LandscapeSpec,
    beta: float,
    icfg: IntegratorConfig,
    *,
    bins: int = 64,
    burn_in: float = BURN_IN,
    chains: int = 1,
    init: Optional[InitialCondition] = None,
) -> AngularHistogram:
    """
    Occupation histogram of constant-temperature chains on a landscape.

    ``chains`` chains of ``icfg.steps`` steps each are advanced together; every
    state after the first ``burn_in`` fraction of steps is counted. Pooling short
    stratified chains samples both wells evenly from the start, where a single
    long chain would depend on the number of barrier crossings it happens to make.

    Parameters
    ----------
    spec : LandscapeSpec
        The potential.

    beta : float
        Constant inverse temperature.

    icfg : IntegratorConfig
        Step-size law, run length per chain and master seed.

    bins : int
        Number of equal arcs.

    burn_in : float
        Fraction of steps discarded, in ``[0, 1)``.

    chains : int
        Number of pooled chains.

    init : InitialCondition | None
        Initial angles; defaults to :func:`~annealab.landscapes.stratified_angle_init`.

    Returns
    -------
    AngularHistogram
        Counts of the retained states.
    """
    if not 0.0 <= burn_in < 1.0:
        raise InvalidInstance(f"burn_in must lie in [0, 1); got {burn_in!r}.")

    _init = init or stratified_angle_init()
    _streams = [chain_streams(icfg.seed, chain) for chain in range(chains)]
    _points = np.stack(
        [_init(chain, chains, _streams[chain][0]) for chain in range(chains)]
    )

    _first = int(math.ceil(burn_in * icfg.steps))
    _counts = np.zeros(bins, dtype=np.int64)

    def _on_step(k: int, t: float, points: np.ndarray, active: np.ndarray):
        if k > _first:
            _counts[:] += np.bincount(
                bin_index(configuration_angle(points), bins), minlength=bins
            )

    advance(
        _points,
        Constant(beta),
        icfg,
        LandscapePotential(spec),
        [streams[1] for streams in _streams],
        on_step=_on_step,
    )

    logger.info(
        "equilibrium_histogram beta=%g chains=%d steps=%d samples=%d",
        beta,
        chains,
        icfg.steps,
        int(_counts.sum()),
    )

    return AngularHistogram(_counts)
