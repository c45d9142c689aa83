# -*- coding: utf-8 -*-
"""
Least-squares fits: Arrhenius law of exit times, log-log scaling of Hessian norms
with the inverse temperature, and the decay exponent of failure curves.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from ..exceptions import InsufficientData, NotSuboptimal
from ..potential import (
    ConfigurationLike,
    PairSet,
    SimilarityKind,
    _as_points,
    argmax_candidates,
    infonce_hessian_anchor,
)
from .escape import FailurePoint

logger = logging.getLogger(__name__)

MIN_SAMPLES: int = 3

POWER_TOLERANCE: float = 1e-10
POWER_MAX_ITERATIONS: int = 10_000


@dataclass(frozen=True)
class FitResult:
    """
    Ordinary least-squares line ``y = slope * x + intercept``.

    ``residual_se`` is :math:`\\sqrt{SSR / (n - 2)}`.
    """

    slope: float
    intercept: float
    residual_se: float
    n: int

    def __post_init__(self):
        if self.n < MIN_SAMPLES:
            raise InsufficientData(
                f"A fit needs at least {MIN_SAMPLES} samples; got {self.n}."
            )


def linear_fit(x: Sequence[float], y: Sequence[float]) -> FitResult:
    """
    Fit a line through ``(x, y)``.

    Raises
    ------
    InsufficientData
        With fewer than three points, non-finite values, or a constant ``x``.
    """
    _x = np.asarray(x, dtype=float)
    _y = np.asarray(y, dtype=float)

    if _x.shape != _y.shape or _x.ndim != 1:
        raise InsufficientData(
            f"x and y must be matching 1-d sequences; got {_x.shape} and {_y.shape}."
        )

    if _x.size < MIN_SAMPLES:
        raise InsufficientData(
            f"A fit needs at least {MIN_SAMPLES} samples; got {_x.size}."
        )

    if not (np.all(np.isfinite(_x)) and np.all(np.isfinite(_y))):
        raise InsufficientData("Cannot fit non-finite samples.")

    if np.ptp(_x) == 0:
        raise InsufficientData("Cannot fit a line through a constant x.")

    _fit = linregress(_x, _y)
    _residuals = _y - (_fit.slope * _x + _fit.intercept)

    return FitResult(
        slope=float(_fit.slope),
        intercept=float(_fit.intercept),
        residual_se=float(math.sqrt(np.sum(_residuals**2) / (_x.size - 2))),
        n=int(_x.size),
    )


def arrhenius_fit(samples: Sequence[Tuple[float, float]]) -> FitResult:
    """
    Fit :math:`\\ln \\bar\\tau = \\beta \\Delta E + b` to ``(beta, mean exit time)``
    pairs.

    The slope estimates the barrier :math:`\\Delta E`; with exit times in SDE time
    the intercept estimates :math:`-\\ln A` for the total exit rate :math:`A`.

    Raises
    ------
    InsufficientData
        With fewer than three inverse temperatures or a non-positive mean.

    Examples
    --------
    >>> fit = arrhenius_fit([(b, math.exp(2.0 * b) / 0.5) for b in (1.0, 2.0, 3.0)])
    >>> round(fit.slope, 9), round(fit.intercept, 9)
    (2.0, 0.693147181)
    """
    _betas = [float(beta) for beta, _ in samples]
    _means = [float(mean) for _, mean in samples]

    if any(not mean > 0 for mean in _means):
        raise InsufficientData("Mean exit times must be > 0 to take their log.")

    _fit = linear_fit(_betas, np.log(_means))
    logger.info(
        "arrhenius_fit slope=%.6g intercept=%.6g n=%d",
        _fit.slope,
        _fit.intercept,
        _fit.n,
    )

    return _fit


def spectral_norm(h: np.ndarray, *, tol: float = POWER_TOLERANCE) -> float:
    """
    Largest singular value of ``h`` by power iteration on :math:`H^T H`.

    The start vector is fixed, so the result is deterministic.
    """
    _h = np.asarray(h, dtype=float)
    _gram = _h.T @ _h

    if not np.any(_gram):
        return 0.0

    _v = 1.0 + np.sqrt(np.arange(1, _gram.shape[0] + 1, dtype=float))
    _v /= np.linalg.norm(_v)
    _value = 0.0

    for _ in range(POWER_MAX_ITERATIONS):
        _w = _gram @ _v
        _norm = np.linalg.norm(_w)
        if _norm == 0.0:
            # The start vector is in the null space; restart off-axis.
            _v = np.roll(_v, 1) + 1.0 / _v.size
            _v /= np.linalg.norm(_v)
            continue
        _v = _w / _norm
        if abs(_norm - _value) <= tol * _norm:
            _value = _norm
            break
        _value = _norm

    return float(math.sqrt(_value))


def loglog_fit(betas: Sequence[float], matrices: Sequence[np.ndarray]) -> FitResult:
    """
    Fit :math:`\\ln \\|H\\|_2` against :math:`\\ln \\beta`.

    Examples
    --------
    >>> m = np.array([[2.0, 1.0], [1.0, 3.0]])
    >>> round(loglog_fit([1.0, 10.0, 100.0], [b * m for b in (1.0, 10.0, 100.0)]).slope, 9)
    1.0
    """
    _norms = [spectral_norm(matrix) for matrix in matrices]

    if any(not value > 0 for value in _norms):
        raise InsufficientData("Spectral norms must be > 0 to take their log.")

    return linear_fit(np.log(np.asarray(betas, dtype=float)), np.log(_norms))


def suboptimal_pair(
    z: ConfigurationLike, kind: SimilarityKind, pairs: PairSet
) -> Tuple[int, int]:
    """
    The first pair whose positive is not among its anchor's maximal candidates.

    Raises
    ------
    NotSuboptimal
        If every positive attains its anchor's maximum.
    """
    for i, j in pairs.pairs:
        if j not in argmax_candidates(z, i, kind, pairs):
            return (i, j)

    raise NotSuboptimal(
        "Every positive attains its anchor's maximal similarity; the configuration "
        "is a global minimiser of the limiting potential."
    )


def sharpening_norms(
    z: ConfigurationLike,
    betas: Sequence[float],
    kind: SimilarityKind,
    pairs: PairSet,
    pair: Optional[Tuple[int, int]] = None,
) -> np.ndarray:
    """
    Spectral norm of the anchor Hessian of ``pair`` at every ``beta``.
    """
    _points = _as_points(z)
    _i, _j = pair or suboptimal_pair(_points, kind, pairs)

    if _j in argmax_candidates(_points, _i, kind, pairs):
        raise NotSuboptimal(
            f"The positive {_j} of anchor {_i} attains the maximal similarity."
        )

    return np.array(
        [
            spectral_norm(infonce_hessian_anchor(_points, _i, _j, beta, kind, pairs))
            for beta in betas
        ]
    )


def sharpening_fit(
    z: ConfigurationLike,
    betas: Sequence[float],
    kind: SimilarityKind,
    pairs: PairSet,
    pair: Optional[Tuple[int, int]] = None,
) -> FitResult:
    """
    Log-log slope of the anchor Hessian's spectral norm against :math:`\\beta` at a
    fixed non-optimal configuration.

    When the positive is not the anchor's best candidate, the softmax concentrates on
    the best one and the covariance term grows like :math:`\\beta^2` times a
    vanishing variance, leaving an overall linear growth.

    Parameters
    ----------
    z : Configuration | numpy.ndarray
        The configuration.

    betas : Sequence[float]
        Inverse temperatures spanning at least one decade.

    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        The instance.

    pair : Tuple[int, int] | None
        The pair whose anchor Hessian is measured; defaults to the first suboptimal
        pair.

    Raises
    ------
    NotSuboptimal
        If the pair's positive is a maximal candidate of its anchor.

    InsufficientData
        If the grid has fewer than three values or spans less than a decade.
    """
    _betas = np.asarray(betas, dtype=float)

    if _betas.size and np.max(_betas) < 10.0 * np.min(_betas):
        raise InsufficientData(
            f"The beta grid must span at least one decade; got {_betas.tolist()}."
        )

    _norms = sharpening_norms(z, _betas, kind, pairs, pair)
    _fit = linear_fit(np.log(_betas), np.log(_norms))

    logger.info("sharpening_fit slope=%.6g n=%d", _fit.slope, _fit.n)

    return _fit


def critical_failure_exponent(
    curve: Sequence[FailurePoint], offset: float, *, eta: float = 1.0
) -> FitResult:
    """
    Fit :math:`P_{fail} \\approx C' (t + K)^{-d}` on a failure curve.

    ``t`` is the checkpoint step times ``eta``, ``K`` is ``offset``; the exponent is
    ``d = -slope``. Checkpoints with zero failures carry no log and are skipped.

    Raises
    ------
    InsufficientData
        With fewer than three checkpoints with a positive failure fraction.
    """
    _points = [point for point in curve if point.failure_fraction > 0]

    return linear_fit(
        [math.log(point.step * eta + offset) for point in _points],
        [math.log(point.failure_fraction) for point in _points],
    )
