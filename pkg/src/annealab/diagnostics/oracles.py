# -*- coding: utf-8 -*-
"""
Finite-difference oracles for the analytic InfoNCE gradient and anchor Hessian.

Both losses are smooth functions of the ambient coordinates, so the checks
difference them in :math:`\\mathbb{R}^{N \\times d}` directly.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..exceptions import InvalidInstance
from ..geometry import sample_uniform_configuration
from ..potential import (
    Cosine,
    Gaussian,
    PairSet,
    SimilarityKind,
    anchor_gradient,
    euclidean_gradient,
    infonce_hessian_anchor,
    infonce_loss,
)

logger = logging.getLogger(__name__)

FD_FLOOR: float = 1e-6
ERROR_FLOOR: float = 1e-4
"""
Denominator floor of relative errors: gradients smaller than this are judged
absolutely.
"""

GRADIENT_TOLERANCE: float = 1e-6
HESSIAN_TOLERANCE: float = 1e-4


def fd_step(x: np.ndarray) -> np.ndarray:
    """
    Per-component step ``max(1e-6, eps^(1/3) * max(1, |x|))``.
    """
    return np.maximum(
        FD_FLOOR, np.finfo(float).eps ** (1.0 / 3.0) * np.maximum(1.0, np.abs(x))
    )


def central_difference(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    *,
    order: int = 2,
    h: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Central-difference derivative of ``f`` at ``x``.

    Parameters
    ----------
    f : Callable[[numpy.ndarray], numpy.ndarray]
        Scalar- or array-valued function of an array.

    x : numpy.ndarray
        Evaluation point.

    order : 2 | 4
        Accuracy order of the stencil.

    h : numpy.ndarray | None
        Step per component of ``x``; defaults to :func:`fd_step`.

    Returns
    -------
    numpy.ndarray
        Shape ``f(x).shape + x.shape``; ``[..., k]`` is the derivative along
        component ``k``.
    """
    if order not in (2, 4):
        raise InvalidInstance(f"Central differences of order 2 or 4 only; got {order}.")

    _x = np.asarray(x, dtype=float)
    _h = fd_step(_x) if h is None else np.broadcast_to(h, _x.shape)
    _flat = _x.ravel()
    _columns = []

    for _k in range(_flat.size):

        def _at(offset: float) -> np.ndarray:
            _shifted = _flat.copy()
            _shifted[_k] += offset
            return np.asarray(f(_shifted.reshape(_x.shape)), dtype=float)

        _step = _h.flat[_k]
        if order == 2:
            _columns.append((_at(_step) - _at(-_step)) / (2.0 * _step))
        else:
            _columns.append(
                (-_at(2 * _step) + 8 * _at(_step) - 8 * _at(-_step) + _at(-2 * _step))
                / (12.0 * _step)
            )

    _jacobian = np.stack(_columns, axis=-1)

    return _jacobian.reshape(_jacobian.shape[:-1] + _x.shape)


def relative_error(analytic: np.ndarray, reference: np.ndarray) -> float:
    """
    ``||analytic - reference||_inf / max(||reference||_inf, 1e-4)``.
    """
    _scale = max(float(np.max(np.abs(reference), initial=0.0)), ERROR_FLOOR)

    return float(np.max(np.abs(analytic - reference), initial=0.0)) / _scale


@dataclass(frozen=True)
class OracleInstance:
    """
    A family of random instances for the oracles.

    Each trial draws a uniform configuration; when ``pairs`` is ``None`` it also
    draws a random pair set.
    """

    kind: SimilarityKind
    n: int
    d: int
    beta: float
    pairs: Optional[PairSet] = None

    def __post_init__(self):
        if self.n < 2 or self.d < 2:
            raise InvalidInstance(
                f"Oracle instances need n >= 2 and d >= 2; got n={self.n}, d={self.d}."
            )

        if not self.beta > 0:
            raise InvalidInstance(f"beta must be > 0; got {self.beta!r}.")

        if self.pairs is not None and self.pairs.n != self.n:
            raise InvalidInstance(
                f"The pair set is defined on {self.pairs.n} points, not n={self.n}."
            )


@dataclass(frozen=True)
class HessianCheck:
    max_rel_err: float
    symmetry_defect: float


def random_pairs(n: int, rng: np.random.Generator) -> PairSet:
    """
    A random pair set: between one and ``n`` distinct anchors, each with a random
    positive.
    """
    _anchors = rng.permutation(n)[: int(rng.integers(1, n + 1))]

    return PairSet.of(
        n,
        [
            (int(i), int((i + 1 + rng.integers(n - 1)) % n))
            for i in sorted(_anchors.tolist())
        ],
    )


def random_instance(
    rng: np.random.Generator,
    *,
    n_range: Sequence[int] = (3, 8),
    d_range: Sequence[int] = (2, 4),
    betas: Sequence[float] = (0.5, 5.0, 50.0),
) -> OracleInstance:
    """
    Draw a random instance: ``n`` and ``d`` uniform in their inclusive ranges, a
    random ``beta`` and similarity kind, and a random pair set.
    """
    _n = int(rng.integers(n_range[0], n_range[1] + 1))
    _kind: SimilarityKind = (
        Cosine() if rng.integers(2) == 0 else Gaussian(float(rng.uniform(0.3, 1.5)))
    )

    return OracleInstance(
        kind=_kind,
        n=_n,
        d=int(rng.integers(d_range[0], d_range[1] + 1)),
        beta=float(betas[int(rng.integers(len(betas)))]),
        pairs=random_pairs(_n, rng),
    )


def gradient_errors(
    instance: OracleInstance, trials: int, rng: np.random.Generator, *, order: int = 2
) -> List[float]:
    """
    Relative error of the analytic full gradient against central differences of
    the loss, one value per trial.
    """
    _errors = []
    for _ in range(trials):
        _pairs = instance.pairs or random_pairs(instance.n, rng)
        _points = sample_uniform_configuration(instance.n, instance.d, rng).points

        _analytic = euclidean_gradient(_points, instance.beta, instance.kind, _pairs)
        _reference = central_difference(
            lambda x: infonce_loss(x, instance.beta, instance.kind, _pairs),
            _points,
            order=order,
        )
        _errors.append(relative_error(_analytic, _reference))

    return _errors


def hessian_errors(
    instance: OracleInstance, trials: int, rng: np.random.Generator, *, order: int = 2
) -> List[HessianCheck]:
    """
    Relative error of the analytic anchor Hessian against central differences of
    the anchor gradient, and its relative symmetry defect, one per trial.
    """
    _checks = []
    for _ in range(trials):
        _pairs = instance.pairs or random_pairs(instance.n, rng)
        _points = sample_uniform_configuration(instance.n, instance.d, rng).points
        _i, _j = _pairs.pairs[int(rng.integers(len(_pairs)))]

        _checks.append(
            hessian_check(_points, _i, _j, instance.beta, instance.kind, _pairs, order)
        )

    return _checks


def hessian_check(
    points: np.ndarray,
    i: int,
    j: int,
    beta: float,
    kind: SimilarityKind,
    pairs: PairSet,
    order: int = 2,
) -> HessianCheck:
    """
    Compare the anchor Hessian of ``(i, j)`` at ``points`` with differences of the
    anchor gradient.
    """
    _analytic = infonce_hessian_anchor(points, i, j, beta, kind, pairs)

    def _gradient(anchor: np.ndarray) -> np.ndarray:
        _moved = points.copy()
        _moved[i] = anchor
        return anchor_gradient(_moved, i, j, beta, kind, pairs)

    _reference = central_difference(_gradient, points[i], order=order)

    _norm = np.linalg.norm(_analytic)
    _defect = float(np.linalg.norm(_analytic - _analytic.T) / _norm) if _norm else 0.0

    return HessianCheck(
        max_rel_err=relative_error(_analytic, _reference), symmetry_defect=_defect
    )


def fd_check_gradient(
    instance: OracleInstance,
    trials: int,
    tolerance: float = GRADIENT_TOLERANCE,
    *,
    seed: int = 0,
    order: int = 2,
) -> float:
    """
    Maximum relative error of the analytic gradient over ``trials`` random
    configurations of ``instance``.

    A maximum above ``tolerance`` is logged as a warning; the value is returned
    either way.

    Examples
    --------
    >>> fd_check_gradient(OracleInstance(Cosine(), n=4, d=3, beta=5.0), 5) <= 1e-6
    True
    """
    if trials < 1:
        raise InvalidInstance(f"trials must be >= 1; got {trials}.")

    _max = max(
        gradient_errors(instance, trials, np.random.default_rng(seed), order=order)
    )

    if _max > tolerance:
        logger.warning(
            "gradient_oracle_failed kind=%s n=%d d=%d beta=%g max_rel_err=%.3e",
            instance.kind.name,
            instance.n,
            instance.d,
            instance.beta,
            _max,
        )

    return _max


def fd_check_hessian(
    instance: OracleInstance,
    trials: int,
    tolerance: float = HESSIAN_TOLERANCE,
    *,
    seed: int = 0,
    order: int = 2,
) -> float:
    """
    Maximum relative error of the analytic anchor Hessian over ``trials`` random
    configurations of ``instance``; see :func:`fd_check_gradient`.
    """
    if trials < 1:
        raise InvalidInstance(f"trials must be >= 1; got {trials}.")

    _checks = hessian_errors(instance, trials, np.random.default_rng(seed), order=order)
    _max = max(check.max_rel_err for check in _checks)

    if _max > tolerance:
        logger.warning(
            "hessian_oracle_failed kind=%s n=%d d=%d beta=%g max_rel_err=%.3e",
            instance.kind.name,
            instance.n,
            instance.d,
            instance.beta,
            _max,
        )

    return _max
