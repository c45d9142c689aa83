# -*- coding: utf-8 -*-
"""
================================
 InfoNCE potential
================================

The InfoNCE loss of a configuration, its Gibbs probabilities, its exact gradients,
the anchor Hessian, the limiting potential :math:`U_0` and the gap between the two.

For a positive pair ``(i, j)`` the per-pair loss is

.. math::

    \\ell_{ij}(Z, \\beta) = -\\log p_i(j | \\beta), \\qquad
    p_i(k | \\beta) = \\frac{e^{\\beta s_{ik}}}{\\sum_{l \\neq i} e^{\\beta s_{il}}}

where the denominator runs over every ``l != i``, the positive included. The total
loss averages :math:`\\ell_{ij}` over the pair set.

Every function accepts either a :class:`~annealab.geometry.Configuration` or a raw
array of shape ``(..., N, d)``. Raw arrays are used as given: they are neither
validated nor normalised, which is what finite-difference checks and the integrator
need. Log-sum-exp reductions are always stabilised.
"""
import abc
import logging
from dataclasses import dataclass, field
from typing import (
    Any,
    ClassVar,
    Dict,
    Iterable,
    Literal,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from scipy.special import logsumexp, softmax

from .exceptions import DimensionMismatch, InvalidInstance
from .geometry import Configuration, TangentVector, UnitVector, tangent_project_rows

logger = logging.getLogger(__name__)

ConfigurationLike = Union[Configuration, np.ndarray]

TIE_TOLERANCE: float = 1e-12
"""
Similarities within this distance of the per-anchor maximum count as maximal.
"""


def _as_points(z: ConfigurationLike) -> np.ndarray:
    if isinstance(z, Configuration):
        return z.points

    return np.asarray(z, dtype=float)


def _as_vector(v: Union[UnitVector, Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(v, UnitVector):
        return v.coords

    return np.asarray(v, dtype=float)


# ======================================================================================
# Similarity kinds


class SimilarityKind(abc.ABC):
    """
    A bounded, symmetric, twice differentiable similarity ``s(a, b)``.

    Subclasses provide the value, the gradient with respect to the first argument and
    the Hessian with respect to the first argument, all vectorised over leading axes.
    Because ``s`` is symmetric, the gradient with respect to the second argument is
    ``gradient(b, a)``.
    """

    name: ClassVar[str]

    bound: ClassVar[float] = 1.0
    """
    Upper bound on ``|s|`` for unit vectors.
    """

    @abc.abstractmethod
    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        ``s(a, b)`` over the last axis; leading axes broadcast.
        """

    @abc.abstractmethod
    def gradient(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        ``d s(a, b) / d a``; shape ``broadcast(a, b)``.
        """

    @abc.abstractmethod
    def hessian(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        ``d^2 s(a, b) / d a^2``; shape ``broadcast(a, b) + (d,)``.
        """

    @abc.abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """
        Serialisable description, the inverse of :func:`similarity_from_dict`.
        """


@dataclass(frozen=True)
class Cosine(SimilarityKind):
    """
    Cosine similarity ``a.b``.

    On raw (non unit) arrays this is the plain inner product, which is linear in
    each argument; its Hessian is identically zero.
    """

    name: ClassVar[str] = "cosine"

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.sum(a * b, axis=-1)

    def gradient(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.broadcast_to(b, np.broadcast_shapes(np.shape(a), np.shape(b))).copy()

    def hessian(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _shape = np.broadcast_shapes(np.shape(a), np.shape(b))

        return np.zeros(_shape + (_shape[-1],))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name}


@dataclass(frozen=True)
class Gaussian(SimilarityKind):
    """
    Gaussian kernel ``exp(-|a - b|^2 / (2 sigma^2))``.

    Parameters
    ----------
    sigma : float
        Bandwidth, ``> 0``.
    """

    name: ClassVar[str] = "gaussian"

    sigma: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInstance(
                f"Gaussian bandwidth sigma must be > 0; got {self.sigma!r}."
            )

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _diff = a - b

        return np.exp(-np.sum(_diff * _diff, axis=-1) / (2.0 * self.sigma**2))

    def gradient(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _diff = a - b
        _s = np.exp(-np.sum(_diff * _diff, axis=-1) / (2.0 * self.sigma**2))

        return -_s[..., None] * _diff / self.sigma**2

    def hessian(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _diff = a - b
        _s = np.exp(-np.sum(_diff * _diff, axis=-1) / (2.0 * self.sigma**2))
        _outer = _diff[..., :, None] * _diff[..., None, :]
        _eye = np.eye(_diff.shape[-1])

        return _s[..., None, None] * (_outer / self.sigma**4 - _eye / self.sigma**2)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "sigma": self.sigma}


SIMILARITY_KINDS: Tuple[str, ...] = (Cosine.name, Gaussian.name)


def similarity_from_dict(spec: Dict[str, Any]) -> SimilarityKind:
    """
    Build a :class:`SimilarityKind` from ``{"name": ..., "sigma": ...}``.

    Raises
    ------
    InvalidInstance
        If the name is unknown or the parameters are invalid.
    """
    _name = spec.get("name")

    if _name == Cosine.name:
        return Cosine()

    if _name == Gaussian.name:
        return Gaussian(sigma=float(spec.get("sigma", 1.0)))

    raise InvalidInstance(
        f"Unknown similarity kind {_name!r}; expected one of {SIMILARITY_KINDS}."
    )


# ======================================================================================
# Pair sets


@dataclass(frozen=True)
class PairSet:
    """
    Positive pairs ``(anchor, positive)`` of an instance with ``n`` points.

    The candidates of anchor ``i`` are every index ``k != i``, the positive included.

    Parameters
    ----------
    n : int
        Number of points of the instance.

    pairs : Sequence[Tuple[int, int]]
        At least one pair; indices in ``[0, n)``; no pair with ``i == j``.
    """

    n: int
    pairs: Tuple[Tuple[int, int], ...]

    anchors: np.ndarray = field(init=False, repr=False, compare=False)
    positives: np.ndarray = field(init=False, repr=False, compare=False)
    _anchor_onehot: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _pairs = tuple((int(i), int(j)) for i, j in self.pairs)

        if self.n < 2:
            raise InvalidInstance(f"An instance needs n >= 2 points; got n={self.n}.")

        if not _pairs:
            raise InvalidInstance("A pair set needs at least one positive pair.")

        for i, j in _pairs:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidInstance(
                    f"Pair ({i}, {j}) has an index outside [0, {self.n})."
                )
            if i == j:
                raise InvalidInstance(
                    f"Pair ({i}, {j}) pairs a point with itself."
                )

        object.__setattr__(self, "pairs", _pairs)

        _anchors = np.array([i for i, _ in _pairs], dtype=int)
        _positives = np.array([j for _, j in _pairs], dtype=int)
        _anchors.setflags(write=False)
        _positives.setflags(write=False)
        object.__setattr__(self, "anchors", _anchors)
        object.__setattr__(self, "positives", _positives)

        _onehot = np.zeros((len(_pairs), self.n))
        _onehot[np.arange(len(_pairs)), _anchors] = 1.0
        object.__setattr__(self, "_anchor_onehot", _onehot)

    @classmethod
    def of(cls, n: int, pairs: Iterable[Sequence[int]]) -> "PairSet":
        return cls(n, tuple(tuple(pair) for pair in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return tuple(pair) in self.pairs

    def candidates(self, i: int) -> np.ndarray:
        """
        Candidate indices of anchor ``i``: every ``k != i``, ascending.
        """
        if not 0 <= i < self.n:
            raise InvalidInstance(f"Anchor {i} is outside [0, {self.n}).")

        return np.array([k for k in range(self.n) if k != i], dtype=int)

    def check(self, points: np.ndarray):
        """
        Raise :class:`~annealab.exceptions.DimensionMismatch` unless ``points`` has
        ``n`` rows.
        """
        if points.ndim < 2 or points.shape[-2] != self.n:
            raise DimensionMismatch(
                f"The pair set is defined on {self.n} points but the configuration "
                f"has shape {points.shape}."
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "pairs": [list(pair) for pair in self.pairs]}


# ======================================================================================
# Evaluation results


@dataclass(frozen=True)
class PotentialEval:
    """
    Loss and gradients of one configuration.

    Parameters
    ----------
    loss : float
        Loss value in nats.

    euclidean_gradient : numpy.ndarray
        ``(N, d)`` gradient of the total loss with respect to every embedding.

    riemannian_gradient : TangentVector
        Per-point tangent projection of ``euclidean_gradient``.
    """

    loss: float
    euclidean_gradient: np.ndarray
    riemannian_gradient: TangentVector


@dataclass(frozen=True)
class FreeEnergyTerms:
    """
    Per-pair free-energy reading of the loss.

    ``free_energy = energy + log_partition / beta = loss / beta`` where the energy of
    a pair is ``-s_ij`` and the log-partition term is ``log Z_i(beta) / beta``.
    """

    energy: np.ndarray
    log_partition: np.ndarray
    free_energy: np.ndarray


# ======================================================================================
# Internal array kernels


def _similarity_matrix(points: np.ndarray, kind: SimilarityKind) -> np.ndarray:
    return kind.pairwise(points[..., :, None, :], points[..., None, :, :])


def _pair_rows(
    points: np.ndarray, kind: SimilarityKind, pairs: PairSet
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Similarity rows of each pair's anchor.

    Returns ``(rows, positive, mask)``: ``rows[..., p, k] = s(z_i, z_k)``,
    ``positive[..., p] = s(z_i, z_j)`` and the ``(P, N)`` candidate mask.
    """
    pairs.check(points)

    _sims = _similarity_matrix(points, kind)
    _rows = _sims[..., pairs.anchors, :]
    _positive = np.take_along_axis(
        _rows, np.broadcast_to(pairs.positives[:, None], _rows.shape[:-1] + (1,)), -1
    )[..., 0]

    _mask = np.ones((len(pairs), pairs.n), dtype=bool)
    _mask[np.arange(len(pairs)), pairs.anchors] = False

    return _rows, _positive, _mask


def _pair_losses(
    points: np.ndarray, beta: float, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    _rows, _positive, _mask = _pair_rows(points, kind, pairs)

    # Logits are shifted by the positive's similarity; the positive's own term is
    # then exactly zero, which keeps each loss >= 0 and accurate when it is tiny.
    _logits = np.where(_mask, beta * (_rows - _positive[..., None]), -np.inf)

    return logsumexp(_logits, axis=-1)


def _pair_probabilities(
    points: np.ndarray, beta: float, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    _rows, _, _mask = _pair_rows(points, kind, pairs)
    _logits = np.where(_mask, beta * _rows, -np.inf)

    return softmax(_logits, axis=-1)


def _euclidean_gradient(
    points: np.ndarray, beta: float, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    _probs = _pair_probabilities(points, beta, kind, pairs)

    # d loss / d s_ik, accumulated per anchor row. The positive's weight p_j - 1 is
    # taken as minus the mass of the other candidates, which stays exact when p_j
    # rounds to 1.
    _is_positive = np.zeros((len(pairs), pairs.n), dtype=bool)
    _is_positive[np.arange(len(pairs)), pairs.positives] = True
    _others = np.where(_is_positive, 0.0, _probs)
    _contrib = (beta / len(pairs)) * np.where(
        _is_positive, -np.sum(_others, axis=-1, keepdims=True), _others
    )
    _weights = np.sum(
        pairs._anchor_onehot[:, :, None] * _contrib[..., :, None, :], axis=-3
    )
    _weights = _weights + np.swapaxes(_weights, -1, -2)

    # _grads[..., m, k] = d s(z_m, z_k) / d z_m
    _grads = kind.gradient(points[..., :, None, :], points[..., None, :, :])

    return np.sum(_weights[..., None] * _grads, axis=-2)


# ======================================================================================
# Public operations


def similarity(
    kind: SimilarityKind,
    a: Union[UnitVector, Sequence[float], np.ndarray],
    b: Union[UnitVector, Sequence[float], np.ndarray],
) -> float:
    """
    Similarity of two points.

    Raises
    ------
    DimensionMismatch
        If ``a`` and ``b`` differ in dimension.
    """
    _a, _b = _as_vector(a), _as_vector(b)

    if _a.shape != _b.shape:
        raise DimensionMismatch(
            f"Cannot compare points of dimension {_a.size} and {_b.size}."
        )

    return float(kind.pairwise(_a, _b))


def similarity_matrix(z: ConfigurationLike, kind: SimilarityKind) -> np.ndarray:
    """
    All pairwise similarities, shape ``(..., N, N)``.
    """
    return _similarity_matrix(_as_points(z), kind)


def softmax_probs(
    z: ConfigurationLike, i: int, beta: float, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    """
    Gibbs probabilities :math:`p_i(k | \\beta)` of anchor ``i`` over its candidates.

    Parameters
    ----------
    z : Configuration | numpy.ndarray
        The configuration.

    i : int
        Anchor index.

    beta : float
        Inverse temperature, ``>= 0``.

    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        The instance; only its size and candidate rule are used.

    Returns
    -------
    numpy.ndarray
        Probabilities over ``pairs.candidates(i)``, in that order.
    """
    _points = _as_points(z)
    pairs.check(_points)
    _candidates = pairs.candidates(i)
    _row = kind.pairwise(_points[..., i : i + 1, :], _points[..., _candidates, :])

    return softmax(beta * _row, axis=-1)


def infonce_loss(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> Union[float, np.ndarray]:
    """
    The InfoNCE loss :math:`\\mathcal{L}(Z, \\beta)` in nats.

    Finite and ``>= 0`` for every ``beta >= 0``; equals ``log(N - 1)`` at
    ``beta = 0``.
    """
    _losses = _pair_losses(_as_points(z), beta, kind, pairs)
    _loss = np.mean(_losses, axis=-1)

    if np.ndim(_loss) == 0:
        return float(_loss)

    return _loss


def scaled_loss(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> Union[float, np.ndarray]:
    """
    The temperature-scaled loss :math:`F_\\beta = \\mathcal{L} / \\beta`.
    """
    _require_positive_beta(beta)

    return infonce_loss(z, beta, kind, pairs) / beta


def log_partition(
    z: ConfigurationLike, i: int, beta: float, kind: SimilarityKind, pairs: PairSet
) -> float:
    """
    :math:`\\log Z_i(\\beta) = \\log \\sum_{k \\neq i} e^{\\beta s_{ik}}`.
    """
    _points = _as_points(z)
    pairs.check(_points)
    _candidates = pairs.candidates(i)
    _row = kind.pairwise(_points[i], _points[_candidates])

    return float(logsumexp(beta * _row))


def free_energy_terms(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> FreeEnergyTerms:
    """
    Split each pair's scaled loss into its energy and log-partition terms.
    """
    _require_positive_beta(beta)

    _points = _as_points(z)
    _rows, _positive, _mask = _pair_rows(_points, kind, pairs)
    _log_z = logsumexp(np.where(_mask, beta * _rows, -np.inf), axis=-1)

    return FreeEnergyTerms(
        energy=-_positive,
        log_partition=_log_z / beta,
        free_energy=_pair_losses(_points, beta, kind, pairs) / beta,
    )


def infonce_gradient(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> PotentialEval:
    """
    Exact gradient of the total loss with respect to every embedding.

    Each embedding contributes as an anchor, as a positive and as a candidate of
    other anchors; the weight of ``s(z_m, z_k)`` in the gradient of ``z_m`` is the sum
    of ``d L / d s_mk`` and ``d L / d s_km``.

    Parameters
    ----------
    z : Configuration
        Base configuration; the Riemannian gradient is tangent to it.

    beta : float
        Inverse temperature, ``> 0``.

    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        The instance.

    Returns
    -------
    PotentialEval
        Loss, Euclidean and Riemannian gradient.
    """
    _require_positive_beta(beta)

    if not isinstance(z, Configuration):
        z = Configuration(_as_points(z))

    _euclidean = _euclidean_gradient(z.points, beta, kind, pairs)

    return PotentialEval(
        loss=infonce_loss(z, beta, kind, pairs),
        euclidean_gradient=_euclidean,
        riemannian_gradient=TangentVector(
            z, tangent_project_rows(z.points, _euclidean)
        ),
    )


def euclidean_gradient(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    """
    Array form of :func:`infonce_gradient`: the Euclidean gradient only, shape
    ``(..., N, d)``, on raw arrays.
    """
    _require_positive_beta(beta)

    return _euclidean_gradient(_as_points(z), beta, kind, pairs)


def anchor_gradient(
    z: ConfigurationLike,
    i: int,
    j: int,
    beta: float,
    kind: SimilarityKind,
    pairs: PairSet,
) -> np.ndarray:
    """
    Gradient of one pair's loss with respect to its anchor only:
    :math:`\\beta(\\mu_i - \\nabla s_{ij})` with
    :math:`\\mu_i = E_{k \\sim p_i}[\\nabla s_{ik}]`.

    Evaluated as :math:`\\beta \\sum_{k} p_k (\\nabla s_{ik} - \\nabla s_{ij})`, whose
    positive term is exactly zero, so the result keeps its relative accuracy when the
    softmax concentrates on the positive.
    """
    _points = _as_points(z)
    pairs.check(_points)

    _candidates = pairs.candidates(i)
    _offsets = kind.gradient(_points[i], _points[_candidates]) - kind.gradient(
        _points[i], _points[j]
    )
    _probs = softmax(beta * kind.pairwise(_points[i], _points[_candidates]))

    return beta * np.sum(_probs[:, None] * _offsets, axis=0)


def infonce_hessian_anchor(
    z: ConfigurationLike,
    i: int,
    j: int,
    beta: float,
    kind: SimilarityKind,
    pairs: PairSet,
) -> np.ndarray:
    """
    Euclidean Hessian of the pair loss :math:`\\ell_{ij}` with respect to the anchor.

    .. math::

        H = \\beta^2 \\mathrm{Cov}_{k \\sim p_i}[\\nabla s_{ik}]
            + \\beta (E_{k \\sim p_i}[H_{ik}] - H_{ij})

    Parameters
    ----------
    z : Configuration | numpy.ndarray
        The configuration.

    i, j : int
        The positive pair; must belong to ``pairs``.

    beta : float
        Inverse temperature, ``> 0``.

    kind : SimilarityKind
        Supplies the closed-form similarity Hessians.

    pairs : PairSet
        The instance.

    Returns
    -------
    numpy.ndarray
        Symmetric ``(d, d)`` matrix in ambient coordinates.

    Raises
    ------
    InvalidInstance
        If ``(i, j)`` is not a positive pair of ``pairs``.
    """
    _require_positive_beta(beta)

    if (i, j) not in pairs:
        raise InvalidInstance(f"({i}, {j}) is not a positive pair of the instance.")

    _points = _as_points(z)
    pairs.check(_points)

    _candidates = pairs.candidates(i)
    _others = _points[_candidates]
    _probs = softmax(beta * kind.pairwise(_points[i], _others))

    # Both terms are taken relative to the positive, whose own offsets vanish.
    _offsets = kind.gradient(_points[i], _others) - kind.gradient(
        _points[i], _points[j]
    )
    _centred = _offsets - np.sum(_probs[:, None] * _offsets, axis=0)
    _covariance = np.sum(
        _probs[:, None, None] * _centred[:, :, None] * _centred[:, None, :], axis=0
    )

    _curvature = np.sum(
        _probs[:, None, None]
        * (kind.hessian(_points[i], _others) - kind.hessian(_points[i], _points[j])),
        axis=0,
    )

    return beta**2 * _covariance + beta * _curvature


def limiting_potential(
    z: ConfigurationLike, kind: SimilarityKind, pairs: PairSet
) -> Union[float, np.ndarray]:
    """
    :math:`U_0(Z)`: the average over pairs of the best candidate similarity minus the
    positive's similarity.

    Always ``>= 0``; zero exactly when every positive attains its anchor's maximum.
    """
    _rows, _positive, _mask = _pair_rows(_as_points(z), kind, pairs)
    _best = np.max(np.where(_mask, _rows, -np.inf), axis=-1)
    _u0 = np.mean(_best - _positive, axis=-1)

    if np.ndim(_u0) == 0:
        return float(_u0)

    return _u0


def scaled_loss_gap(
    z: ConfigurationLike, beta: float, kind: SimilarityKind, pairs: PairSet
) -> Union[float, np.ndarray]:
    """
    :math:`\\mathcal{L}(Z, \\beta) / \\beta - U_0(Z)`.

    Evaluated per pair as ``logsumexp(beta * (s_i - max s_i)) / beta``, so the result
    lies in ``[mean log|K_i| / beta, log(N - 1) / beta]`` up to rounding, where
    ``K_i`` is the set of maximal candidates of anchor ``i``.
    """
    _require_positive_beta(beta)

    _rows, _, _mask = _pair_rows(_as_points(z), kind, pairs)
    _best = np.max(np.where(_mask, _rows, -np.inf), axis=-1)
    _gaps = (
        logsumexp(np.where(_mask, beta * (_rows - _best[..., None]), -np.inf), axis=-1)
        / beta
    )
    _gap = np.mean(_gaps, axis=-1)

    if np.ndim(_gap) == 0:
        return float(_gap)

    return _gap


def argmax_candidates(
    z: ConfigurationLike, i: int, kind: SimilarityKind, pairs: PairSet
) -> np.ndarray:
    """
    Candidates of anchor ``i`` whose similarity is within :data:`TIE_TOLERANCE` of
    the maximum, ascending. The first entry is the canonical witness.
    """
    _points = _as_points(z)
    pairs.check(_points)

    _candidates = pairs.candidates(i)
    _row = kind.pairwise(_points[i], _points[_candidates])

    return _candidates[_row >= np.max(_row) - TIE_TOLERANCE]


def _require_positive_beta(beta: float):
    if not beta > 0:
        raise InvalidInstance(
            f"This operation needs an inverse temperature beta > 0; got {beta!r}."
        )


# ======================================================================================
# Potentials driven by the integrator


class Potential(abc.ABC):
    """
    What the integrator needs from a potential, on stacked arrays ``(..., N, d)``.

    Points flagged in :attr:`frozen` never move: their gradient and noise are zeroed
    by the integrator.
    """

    n: int
    frozen: np.ndarray

    @abc.abstractmethod
    def loss(self, points: np.ndarray, beta: float) -> np.ndarray:
        """
        The loss recorded along trajectories, shape ``points.shape[:-2]``.
        """

    @abc.abstractmethod
    def limiting(self, points: np.ndarray) -> np.ndarray:
        """
        The limiting potential, shape ``points.shape[:-2]``.
        """

    @abc.abstractmethod
    def euclidean_gradient(self, points: np.ndarray, beta: float) -> np.ndarray:
        """
        Euclidean gradient of the drift potential, shape ``points.shape``.
        """

    def riemannian_gradient(self, points: np.ndarray, beta: float) -> np.ndarray:
        """
        Tangent-projected gradient with frozen points zeroed.
        """
        _grad = tangent_project_rows(points, self.euclidean_gradient(points, beta))

        if self.frozen.any():
            _grad[..., self.frozen, :] = 0.0

        return _grad

    def evaluate(self, z: Configuration, beta: float) -> PotentialEval:
        """
        Loss and gradients of a single configuration.
        """
        _euclidean = self.euclidean_gradient(z.points, beta)

        return PotentialEval(
            loss=float(self.loss(z.points, beta)),
            euclidean_gradient=_euclidean,
            riemannian_gradient=TangentVector(
                z, tangent_project_rows(z.points, _euclidean)
            ),
        )


class InfoNCEPotential(Potential):
    """
    The InfoNCE loss as a Langevin potential.

    Parameters
    ----------
    kind : SimilarityKind
        The similarity.

    pairs : PairSet
        The instance.

    frozen : Sequence[int] | None
        Indices of points held fixed.

    drift : "unscaled" | "scaled"
        ``"unscaled"`` drives the dynamics with the gradient of the loss itself
        (growing with ``beta``); ``"scaled"`` with the gradient of
        :math:`F_\\beta = \\mathcal{L} / \\beta`. The recorded loss is always the
        unscaled one.
    """

    DRIFTS: ClassVar[Tuple[str, ...]] = ("unscaled", "scaled")

    def __init__(
        self,
        kind: SimilarityKind,
        pairs: PairSet,
        *,
        frozen: Optional[Sequence[int]] = None,
        drift: Literal["unscaled", "scaled"] = "unscaled",
    ):
        if drift not in self.DRIFTS:
            raise InvalidInstance(
                f"Unknown drift {drift!r}; expected one of {self.DRIFTS}."
            )

        self.kind = kind
        self.pairs = pairs
        self.n = pairs.n
        self.drift = drift

        self.frozen = np.zeros(pairs.n, dtype=bool)
        if frozen is not None:
            self.frozen[list(frozen)] = True

    def loss(self, points: np.ndarray, beta: float) -> np.ndarray:
        return np.mean(_pair_losses(points, beta, self.kind, self.pairs), axis=-1)

    def limiting(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(limiting_potential(points, self.kind, self.pairs))

    def euclidean_gradient(self, points: np.ndarray, beta: float) -> np.ndarray:
        _grad = _euclidean_gradient(points, beta, self.kind, self.pairs)

        if self.drift == "scaled":
            return _grad / beta

        return _grad

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(kind={self.kind!r}, pairs={self.pairs.pairs!r}, "
            f"drift={self.drift!r})"
        )
