# -*- coding: utf-8 -*-
"""
================================
 Inverse-temperature schedules
================================

Schedules :math:`\\beta(t)` for annealing, the critical rate
:math:`c^* = 1 / \\Delta E_{max}` and the classification of a schedule against it.

Logarithmic schedules :math:`\\beta(t) = c \\ln(t + K)` additionally come with the
escape-rate predictions that motivate the critical rate: the instantaneous escape
rate :math:`A (t + K)^{-c / c^*}` out of the deepest suboptimal basin, its integral,
and the comparison between the time a schedule spends near a given temperature and
the time an escape needs there.
"""
import abc
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, ClassVar, Dict, Union

import numpy as np

from .exceptions import InvalidSchedule

logger = logging.getLogger(__name__)

CRITICAL_TOLERANCE: float = 1e-12
"""
Logarithmic rates within this distance of ``c*`` are critical.
"""

TimeLike = Union[float, np.ndarray]


def _require(condition: bool, message: str, field: str):
    if not condition:
        raise InvalidSchedule(message, field=field)


def _finite(*values: float) -> bool:
    return all(math.isfinite(value) for value in values)


class Schedule(abc.ABC):
    """
    An inverse-temperature law :math:`\\beta(t) > 0` for ``t >= 0``.

    Schedules are immutable; their invariants are checked at construction and
    violations raise :class:`~annealab.exceptions.InvalidSchedule`.
    """

    kind: ClassVar[str]

    @abc.abstractmethod
    def beta(self, t: TimeLike) -> TimeLike:
        """
        Evaluate the schedule; ``t`` is assumed to be ``>= 0``.
        """

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.kind, **asdict(self)}


@dataclass(frozen=True)
class Constant(Schedule):
    """
    Flat schedule :math:`\\beta(t) = \\beta_0`.
    """

    kind: ClassVar[str] = "constant"

    beta0: float

    def __post_init__(self):
        _require(
            _finite(self.beta0) and self.beta0 > 0,
            f"beta0 must be finite and > 0; got {self.beta0!r}.",
            "beta0",
        )

    def beta(self, t: TimeLike) -> TimeLike:
        if np.ndim(t):
            return np.full(np.shape(t), self.beta0)

        return self.beta0


@dataclass(frozen=True)
class Logarithmic(Schedule):
    """
    Logarithmic schedule :math:`\\beta(t) = c \\ln(t + K)`.

    Parameters
    ----------
    c : float
        Rate, ``> 0``.

    K : float
        Offset, ``> 1`` so that :math:`\\beta(0) = c \\ln K > 0`.
    """

    kind: ClassVar[str] = "logarithmic"

    c: float
    K: float

    def __post_init__(self):
        _require(
            _finite(self.c) and self.c > 0,
            f"c must be finite and > 0; got {self.c!r}.",
            "c",
        )
        _require(
            _finite(self.K) and self.K > 1,
            f"K must be > 1 so that beta(0) > 0; got {self.K!r}.",
            "K",
        )

    def beta(self, t: TimeLike) -> TimeLike:
        if np.ndim(t):
            return self.c * np.log(np.asarray(t, dtype=float) + self.K)

        return self.c * math.log(t + self.K)

    def time_to_reach(self, beta: float) -> float:
        """
        The time at which the schedule reaches ``beta``: ``exp(beta / c) - K``.

        Negative when ``beta < beta(0)``.
        """
        return math.exp(beta / self.c) - self.K


@dataclass(frozen=True)
class Power(Schedule):
    """
    Power-law schedule :math:`\\beta(t) = \\beta_0 (1 + t)^p`; ``p = 1/2`` is the
    square-root schedule.
    """

    kind: ClassVar[str] = "power"

    beta0: float
    exponent: float

    def __post_init__(self):
        _require(
            _finite(self.beta0) and self.beta0 > 0,
            f"beta0 must be finite and > 0; got {self.beta0!r}.",
            "beta0",
        )
        _require(
            _finite(self.exponent) and self.exponent > 0,
            f"exponent must be finite and > 0; got {self.exponent!r}.",
            "exponent",
        )

    def beta(self, t: TimeLike) -> TimeLike:
        if np.ndim(t):
            return self.beta0 * (1.0 + np.asarray(t, dtype=float)) ** self.exponent

        return self.beta0 * (1.0 + t) ** self.exponent


@dataclass(frozen=True)
class Cosine(Schedule):
    """
    Half-cosine ramp from ``beta_start`` up to ``beta_end`` over ``[0, horizon]``,
    flat at ``beta_end`` afterwards.
    """

    kind: ClassVar[str] = "cosine"

    beta_start: float
    beta_end: float
    horizon: float

    def __post_init__(self):
        _require(
            _finite(self.beta_start) and self.beta_start > 0,
            f"beta_start must be finite and > 0; got {self.beta_start!r}.",
            "beta_start",
        )
        _require(
            _finite(self.beta_end) and self.beta_end >= self.beta_start,
            f"beta_end must be >= beta_start={self.beta_start!r}; "
            f"got {self.beta_end!r}.",
            "beta_end",
        )
        _require(
            _finite(self.horizon) and self.horizon > 0,
            f"horizon must be finite and > 0; got {self.horizon!r}.",
            "horizon",
        )

    def beta(self, t: TimeLike) -> TimeLike:
        _progress = np.minimum(np.asarray(t, dtype=float), self.horizon) / self.horizon
        _beta = self.beta_end + (self.beta_start - self.beta_end) * 0.5 * (
            1.0 + np.cos(np.pi * _progress)
        )

        if np.ndim(_beta) == 0:
            return float(_beta)

        return _beta


SCHEDULES: Dict[str, type] = {
    _class.kind: _class for _class in (Constant, Logarithmic, Power, Cosine)
}


def schedule_from_dict(spec: Dict[str, Any]) -> Schedule:
    """
    Build a schedule from ``{"type": <kind>, **parameters}``.

    Raises
    ------
    InvalidSchedule
        On an unknown type, unknown or missing parameters, or violated invariants.
    """
    _spec = dict(spec)
    _kind = _spec.pop("type", None)

    if _kind not in SCHEDULES:
        raise InvalidSchedule(
            f"Unknown schedule type {_kind!r}; expected one of {tuple(SCHEDULES)}.",
            field="type",
        )

    try:
        return SCHEDULES[_kind](**{key: float(value) for key, value in _spec.items()})
    except InvalidSchedule:
        raise
    except (TypeError, ValueError) as e:
        raise InvalidSchedule(
            f"Bad parameters for a {_kind} schedule: {e}", field="type"
        ) from None


def beta_at(s: Schedule, t: TimeLike) -> TimeLike:
    """
    Evaluate ``s`` at time ``t >= 0``.

    Raises
    ------
    InvalidSchedule
        If ``t`` is negative.
    """
    if np.any(np.asarray(t) < 0):
        raise InvalidSchedule(
            f"Schedules are defined for t >= 0; got {t!r}.", field="t"
        )

    return s.beta(t)


# ======================================================================================
# Critical rate and classification


@dataclass(frozen=True)
class CriticalRate:
    """
    The largest barrier of a landscape and the critical logarithmic rate.

    A landscape without a suboptimal basin has ``delta_e_max = 0`` and
    ``c_star = inf``.
    """

    delta_e_max: float
    c_star: float

    def __post_init__(self):
        if not self.delta_e_max >= 0 or math.isnan(self.c_star):
            raise ValueError(
                f"delta_e_max must be >= 0; got {self.delta_e_max!r}."
            )

    @classmethod
    def from_barrier(cls, delta_e_max: float) -> "CriticalRate":
        """
        ``c* = 1 / delta_e_max``.
        """
        return cls(
            delta_e_max=float(delta_e_max),
            c_star=(1.0 / delta_e_max) if delta_e_max > 0 else math.inf,
        )


class ScheduleClass(str, Enum):
    """
    Outcome of :func:`classify_schedule`.
    """

    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"
    NON_LOGARITHMIC = "non-logarithmic"


def classify_schedule(s: Schedule, critical: CriticalRate) -> ScheduleClass:
    """
    Compare a schedule's rate with the critical rate.

    Only exact logarithmic schedules are classified against ``c*``; every other
    schedule is :attr:`ScheduleClass.NON_LOGARITHMIC`.
    """
    if not isinstance(s, Logarithmic):
        return ScheduleClass.NON_LOGARITHMIC

    if abs(s.c - critical.c_star) <= CRITICAL_TOLERANCE:
        return ScheduleClass.CRITICAL

    if s.c < critical.c_star:
        return ScheduleClass.SUBCRITICAL

    return ScheduleClass.SUPERCRITICAL


# ======================================================================================
# Escape-rate predictions of logarithmic schedules


def _require_logarithmic(s: Schedule) -> Logarithmic:
    if not isinstance(s, Logarithmic):
        raise InvalidSchedule(
            f"Escape-rate predictions need a logarithmic schedule; got {s!r}.",
            field="type",
        )

    return s


def escape_rate(
    s: Schedule, prefactor: float, critical: CriticalRate, t: TimeLike
) -> TimeLike:
    """
    Instantaneous escape rate :math:`A (t + K)^{-c / c^*}` out of the basin whose
    barrier is ``critical.delta_e_max``, i.e. :math:`A e^{-\\beta(t) \\Delta E}`.
    """
    _s = _require_logarithmic(s)

    return prefactor * np.power(
        np.asarray(t, dtype=float) + _s.K, -_s.c / critical.c_star
    )


def integrated_escape_rate(
    s: Schedule,
    prefactor: float,
    critical: CriticalRate,
    t: TimeLike,
    *,
    t0: float = 0.0,
) -> TimeLike:
    """
    :math:`\\int_{t_0}^{t} A (u + K)^{-c / c^*} du` in closed form.

    Diverges as ``t -> inf`` exactly when ``c <= c*``; at the critical rate the
    integral is logarithmic in time.
    """
    _s = _require_logarithmic(s)
    _alpha = _s.c / critical.c_star
    _upper = np.asarray(t, dtype=float) + _s.K
    _lower = t0 + _s.K

    if classify_schedule(_s, critical) is ScheduleClass.CRITICAL:
        return prefactor * np.log(_upper / _lower)

    return (
        prefactor
        * (np.power(_upper, 1.0 - _alpha) - _lower ** (1.0 - _alpha))
        / (1.0 - _alpha)
    )


def survival_bound(
    s: Schedule,
    prefactor: float,
    critical: CriticalRate,
    t: TimeLike,
    *,
    t0: float = 0.0,
) -> TimeLike:
    """
    Probability of never escaping by time ``t`` under the predicted rate:
    :math:`\\exp(-\\int r)`.
    """
    return np.exp(-integrated_escape_rate(s, prefactor, critical, t, t0=t0))


def available_time(s: Schedule, beta: float) -> float:
    """
    How long a logarithmic schedule takes to reach ``beta``: ``exp(beta / c) - K``.
    """
    return _require_logarithmic(s).time_to_reach(beta)


def required_escape_time(
    beta: float, delta_e: float, *, prefactor: float = 1.0
) -> float:
    """
    Expected escape time over a barrier ``delta_e`` at ``beta``:
    ``exp(beta * delta_e) / prefactor``.
    """
    return math.exp(beta * delta_e) / prefactor


def escapes_in_time(
    s: Schedule, critical: CriticalRate, beta: float, *, prefactor: float = 1.0
) -> bool:
    """
    Whether the schedule has spent at least the required escape time by the moment
    it reaches ``beta``.

    Compared on a log scale, so that large ``beta`` does not overflow.
    """
    _s = _require_logarithmic(s)

    if math.isinf(critical.c_star):
        return True

    # log(exp(beta / c) - K) without forming exp(beta / c).
    _exponent = beta / _s.c
    _gap = -_s.K * math.exp(-_exponent)
    if _gap <= -1.0:
        return False

    _log_available = _exponent + math.log1p(_gap)
    _log_required = beta * critical.delta_e_max - math.log(prefactor)

    return _log_available >= _log_required
