# -*- coding: utf-8 -*-
"""
Exit times and success probabilities.

Exit-time statistics of fixed-temperature chains leaving a basin, and Wilson-score
success fractions of ensembles, at the end of a run or at checkpoint snapshots.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from ..dynamics import EnsembleResult, IntegratorConfig, run_ensemble, sde_time
from ..exceptions import AllCensored, DegenerateCritical, InvalidInstance
from ..landscapes import (
    BasinLabel,
    LandscapePotential,
    LandscapeSpec,
    angle_init,
    configuration_angle,
    kramers_prefactor,
)
from ..schedules import Constant

logger = logging.getLogger(__name__)

CONFIDENCE: float = 0.95

HORIZON_FACTOR: float = 50.0
"""
Horizons shorter than this many expected exit times bias the mean exit time low.
"""

Target = Callable[[np.ndarray], bool]
"""
Success predicate over a chain's ``(N, d)`` state.
"""


@dataclass(frozen=True)
class ExitTimeSample:
    """
    First exit of one chain; ``exit_step == -1`` when censored at the horizon.
    """

    beta: float
    chain: int
    exit_step: int
    exit_time: float
    start_basin: BasinLabel

    def __post_init__(self):
        if self.exit_step == 0 or self.exit_step < -1:
            raise InvalidInstance(
                f"Exit steps are >= 1, or -1 when censored; got {self.exit_step}."
            )

    @property
    def censored(self) -> bool:
        return self.exit_step < 0


@dataclass(frozen=True)
class ExitTimeEstimate:
    """
    Mean exit time of the uncensored chains and its confidence interval, in the
    schedule clock (SDE time by default).
    """

    beta: float
    samples: Tuple[ExitTimeSample, ...]
    mean: float
    ci_low: float
    ci_high: float
    mean_steps: float

    @property
    def exited(self) -> int:
        return sum(not sample.censored for sample in self.samples)

    @property
    def censored(self) -> int:
        return sum(sample.censored for sample in self.samples)

    @property
    def log_mean(self) -> float:
        return math.log(self.mean)


@dataclass(frozen=True)
class SuccessFraction:
    """
    Fraction of successful chains with its Wilson interval.
    """

    successes: int
    total: int
    fraction: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class FailurePoint:
    """
    Failure probability at one checkpoint.
    """

    step: int
    failure_fraction: float
    ci_low: float
    ci_high: float


def _z(confidence: float) -> float:
    return float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))


def wilson_interval(
    successes: int, total: int, confidence: float = CONFIDENCE
) -> Tuple[float, float]:
    """
    Wilson score interval of a binomial proportion.

    The bounds are exactly ``1.0`` when every trial succeeds and ``0.0`` when none
    does.
    """
    if total <= 0:
        return (0.0, 1.0)

    _z2 = _z(confidence) ** 2
    _p = successes / total
    _denominator = 1.0 + _z2 / total
    _centre = (_p + _z2 / (2.0 * total)) / _denominator
    _margin = (
        math.sqrt(_z2)
        / _denominator
        * math.sqrt(_p * (1.0 - _p) / total + _z2 / (4.0 * total * total))
    )

    _low = 0.0 if successes == 0 else max(0.0, _centre - _margin)
    _high = 1.0 if successes == total else min(1.0, _centre + _margin)

    return (_low, _high)


def _fraction(flags: Sequence[bool], confidence: float) -> SuccessFraction:
    _successes = int(sum(bool(flag) for flag in flags))
    _total = len(flags)
    _low, _high = wilson_interval(_successes, _total, confidence)

    return SuccessFraction(
        successes=_successes,
        total=_total,
        fraction=_successes / _total if _total else 0.0,
        ci_low=_low,
        ci_high=_high,
    )


def success_fraction(
    ens: EnsembleResult, target: Target, confidence: float = CONFIDENCE
) -> SuccessFraction:
    """
    Fraction of chains whose final state satisfies ``target``; failed chains count as
    unsuccessful.
    """
    _failed = ens.failed

    return _fraction(
        [
            not _failed[chain] and target(ens.final_states[chain])
            for chain in range(ens.chains)
        ],
        confidence,
    )


def success_fraction_at(
    ens: EnsembleResult, step: int, target: Target, confidence: float = CONFIDENCE
) -> SuccessFraction:
    """
    :func:`success_fraction` of the snapshot taken at ``step``.
    """
    if step not in ens.checkpoints:
        raise KeyError(f"No snapshot at step {step}; have {sorted(ens.checkpoints)}.")

    _snapshot = ens.checkpoints[step]
    _failed = ens.failed

    return _fraction(
        [
            not _failed[chain] and target(_snapshot[chain])
            for chain in range(ens.chains)
        ],
        confidence,
    )


def failure_curve(
    ens: EnsembleResult, target: Target, confidence: float = CONFIDENCE
) -> List[FailurePoint]:
    """
    Failure probability and its Wilson interval at every checkpoint, by step.
    """
    _curve = []
    for _step in sorted(ens.checkpoints):
        _success = success_fraction_at(ens, _step, target, confidence)
        _curve.append(
            FailurePoint(
                step=_step,
                failure_fraction=1.0 - _success.fraction,
                ci_low=1.0 - _success.ci_high,
                ci_high=1.0 - _success.ci_low,
            )
        )

    return _curve


def is_non_increasing_within_intervals(curve: Sequence[FailurePoint]) -> bool:
    """
    Whether failure never increases between consecutive checkpoints beyond what
    their intervals allow: each point is at most the previous one, or the two
    intervals overlap.
    """
    return all(
        after.failure_fraction <= before.failure_fraction
        or after.ci_low <= before.ci_high
        for before, after in zip(curve, curve[1:])
    )


def estimate_exit_times(
    spec: LandscapeSpec,
    beta: float,
    start_basin: BasinLabel,
    m: int,
    horizon: int,
    icfg: IntegratorConfig,
    *,
    confidence: float = CONFIDENCE,
    workers: Optional[int] = None,
) -> ExitTimeEstimate:
    """
    First exit times of ``m`` constant-temperature chains started at the minimum of
    ``start_basin``.

    A chain exits at the first step whose basin label differs from
    ``start_basin``; chains still inside after ``horizon`` steps are censored and
    reported, but enter no average. The interval is the delta-method interval of
    :math:`\\ln \\bar\\tau`: :math:`\\bar\\tau \\exp(\\pm z\\, s / (\\bar\\tau \\sqrt{n}))`.

    Parameters
    ----------
    spec : LandscapeSpec
        The potential.

    beta : float
        Constant inverse temperature.

    start_basin : BasinLabel
        Basin every chain starts in, at its minimum.

    m : int
        Number of chains.

    horizon : int
        Maximum number of steps per chain.

    icfg : IntegratorConfig
        Step-size law and master seed; its ``steps`` is replaced by ``horizon``.

    Returns
    -------
    ExitTimeEstimate
        Samples of every chain and the statistics of the exited ones.

    Raises
    ------
    AllCensored
        If no chain exits within the horizon.
    """
    if start_basin.is_saddle:
        raise InvalidInstance("Exit times are measured from a basin, not a saddle.")

    _icfg = icfg.with_changes(steps=horizon)
    _warn_short_horizon(spec, beta, start_basin, sde_time(_icfg, horizon))

    _ensemble = run_ensemble(
        m,
        angle_init(spec.minima[start_basin.index].angle),
        Constant(beta),
        _icfg,
        LandscapePotential(spec),
        stop_when=lambda points: spec.basin_indices(configuration_angle(points))
        != start_basin.index,
        workers=workers,
    )

    _samples = tuple(
        ExitTimeSample(
            beta=beta,
            chain=chain,
            exit_step=int(_ensemble.exit_steps[chain]),
            exit_time=float(_ensemble.exit_times[chain]),
            start_basin=start_basin,
        )
        for chain in range(m)
    )

    _exited = [sample for sample in _samples if not sample.censored]
    if not _exited:
        raise AllCensored(
            f"No chain out of {m} left {start_basin} within {horizon} steps at "
            f"beta={beta}; lengthen the horizon."
        )

    if len(_exited) < m:
        logger.warning(
            "exit_times_censored beta=%g censored=%d of=%d",
            beta,
            m - len(_exited),
            m,
        )

    _times = np.array([sample.exit_time for sample in _exited])
    _mean = float(_times.mean())
    _sd = float(_times.std(ddof=1)) if _times.size > 1 else 0.0
    _spread = _z(confidence) * _sd / (_mean * math.sqrt(_times.size))

    logger.info(
        "exit_times beta=%g exited=%d mean=%.6g", beta, len(_exited), _mean
    )

    return ExitTimeEstimate(
        beta=beta,
        samples=_samples,
        mean=_mean,
        ci_low=_mean * math.exp(-_spread),
        ci_high=_mean * math.exp(_spread),
        mean_steps=float(np.mean([sample.exit_step for sample in _exited])),
    )


def _warn_short_horizon(
    spec: LandscapeSpec, beta: float, basin: BasinLabel, horizon_time: float
):
    try:
        _prefactor = kramers_prefactor(spec, basin)
    except DegenerateCritical:
        return

    _log_expected = beta * spec.exit_barrier(basin) - math.log(_prefactor)
    if math.log(max(horizon_time, 1e-300)) < math.log(HORIZON_FACTOR) + _log_expected:
        logger.warning(
            "exit_horizon_short beta=%g horizon_time=%.6g expected_exit=%.6g",
            beta,
            horizon_time,
            math.exp(min(_log_expected, 700.0)),
        )
