# -*- coding: utf-8 -*-
"""
==========================
 Annealed SGLD integrator
==========================

Euler-Maruyama discretisation of the annealed Langevin dynamics on the product
sphere:

.. math::

    Z_{k+1} = \\Pi\\left[Z_k - \\eta_k \\, \\mathrm{grad}\\, U(Z_k, \\beta_k)
        + \\sqrt{2 \\eta_k / \\beta_k} \\, \\xi_k\\right]

with :math:`\\xi_k` a tangent Gaussian and :math:`\\Pi` the projection retraction.
The temperature uses :math:`\\beta` at the start of each step.

One kernel, :func:`advance`, advances a stack of chains ``(M, N, d)`` together; a
single trajectory is the ``M = 1`` case of the same code path, so that a trajectory
and chain 0 of an ensemble agree bit for bit.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import env
from ..exceptions import InvalidIntegrator, StepOverflow
from ..geometry import Configuration, tangent_project_rows
from ..potential import Potential
from ..schedules import Schedule
from ..utils.seeding import MAX_SEED, chain_streams

logger = logging.getLogger(__name__)

MAX_STEP_NORM: float = math.pi / 2.0
"""
Per-point steps at least this long overflow: the projection retraction is no longer a
faithful surrogate of the geodesic step.
"""

StepCallback = Callable[[int, float, np.ndarray, np.ndarray], Optional[np.ndarray]]
"""
``on_step(k, t, points, active)`` is called after step ``k`` (1-based) at SDE time
``t`` with the ``(M, N, d)`` state; it may return a boolean mask of chains to retire.
"""


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Step-size law and run length of the integrator.

    Parameters
    ----------
    eta0 : float
        Initial learning rate, ``> 0``.

    eta_decay : float
        Exponent ``a`` of the decaying law ``eta0 / (1 + k)^a``; ``0`` keeps the rate
        constant, otherwise ``a`` must lie in ``(0.5, 1]``.

    steps : int
        Number of steps, ``>= 0``.

    record_every : int
        Recording stride of :func:`run_trajectory`, ``>= 1``.

    seed : int
        Master seed, in ``[0, 2**64)``.

    noise_on : bool
        ``False`` runs noiseless (projected) gradient descent.

    time_mode : "sde" | "step"
        Clock of the schedule. ``"sde"`` evaluates :math:`\\beta` at the cumulative
        :math:`\\sum \\eta`, ``"step"`` at the raw step index.
    """

    TIME_MODES: ClassVar[Tuple[str, ...]] = ("sde", "step")

    eta0: float
    steps: int
    eta_decay: float = 0.0
    record_every: int = 1
    seed: int = 0
    noise_on: bool = True
    time_mode: str = "sde"

    def __post_init__(self):
        if not (math.isfinite(self.eta0) and self.eta0 > 0):
            raise InvalidIntegrator(
                f"eta0 must be finite and > 0; got {self.eta0!r}.", field="eta0"
            )

        if not (self.eta_decay == 0 or 0.5 < self.eta_decay <= 1):
            raise InvalidIntegrator(
                f"eta_decay must be 0 (constant rate) or lie in (0.5, 1]; "
                f"got {self.eta_decay!r}.",
                field="eta_decay",
            )

        if int(self.steps) != self.steps or self.steps < 0:
            raise InvalidIntegrator(
                f"steps must be an integer >= 0; got {self.steps!r}.", field="steps"
            )

        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise InvalidIntegrator(
                f"record_every must be an integer >= 1; got {self.record_every!r}.",
                field="record_every",
            )

        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise InvalidIntegrator(
                f"seed must be an integer in [0, 2**64); got {self.seed!r}.",
                field="seed",
            )

        if self.time_mode not in self.TIME_MODES:
            raise InvalidIntegrator(
                f"time_mode must be one of {self.TIME_MODES}; got {self.time_mode!r}.",
                field="time_mode",
            )

        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "record_every", int(self.record_every))
        object.__setattr__(self, "seed", int(self.seed))

    def eta(self, k: int) -> float:
        """
        Learning rate of step ``k``.
        """
        if self.eta_decay == 0:
            return self.eta0

        return self.eta0 / (1.0 + k) ** self.eta_decay

    def with_changes(self, **changes: Any) -> "IntegratorConfig":
        return IntegratorConfig(**{**asdict(self), **changes})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def eta_at(icfg: IntegratorConfig, k: int) -> float:
    """
    Learning rate :math:`\\eta_k`.
    """
    return icfg.eta(k)


def sde_time(icfg: IntegratorConfig, k: int) -> float:
    """
    Schedule clock at the start of step ``k``.

    In ``"sde"`` mode this is :math:`\\sum_{i < k} \\eta_i`, accumulated in the same
    order as the integrator so that both agree exactly.
    """
    if icfg.time_mode == "step":
        return float(k)

    _t = 0.0
    for _k in range(k):
        _t += icfg.eta(_k)

    return _t


@dataclass(frozen=True)
class Trajectory:
    """
    Recorded sample path of one chain.

    Records are taken at step 0, at every multiple of ``record_every`` and at the
    final step.
    """

    times: np.ndarray
    sde_times: np.ndarray
    states: List[Configuration]
    beta_values: np.ndarray
    loss_values: np.ndarray
    u0_values: np.ndarray
    time_mode: str

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self) -> Configuration:
        return self.states[-1]


# ======================================================================================
# Kernel


def _draw_noise(
    rngs: Sequence[np.random.Generator], count: int, shape: Tuple[int, ...]
) -> np.ndarray:
    """
    ``count`` steps of noise for every chain, shape ``(count, M, *shape)``.

    Each chain's block is drawn in one call on its own stream, so the values do not
    depend on ``count``.
    """
    return np.stack([rng.standard_normal((count,) + shape) for rng in rngs], axis=1)


def _step_arrays(
    points: np.ndarray,
    beta: float,
    eta: float,
    potential: Potential,
    xi: Optional[np.ndarray],
) -> Tuple[np.ndarray, np.ndarray]:
    """
    One step on stacked chains; returns the new points and a per-chain overflow
    mask.
    """
    _step = -eta * potential.riemannian_gradient(points, beta)

    if xi is not None:
        _noise = tangent_project_rows(points, xi)
        if potential.frozen.any():
            _noise[..., potential.frozen, :] = 0.0
        _step = _step + math.sqrt(2.0 * eta / beta) * _noise

    _overflow = np.any(np.linalg.norm(_step, axis=-1) >= MAX_STEP_NORM, axis=-1)

    _moved = points + _step
    _moved /= np.linalg.norm(_moved, axis=-1, keepdims=True)

    return _moved, _overflow


def advance(
    points: np.ndarray,
    sched: Schedule,
    icfg: IntegratorConfig,
    potential: Potential,
    noise_rngs: Sequence[np.random.Generator],
    *,
    chain_ids: Optional[Sequence[int]] = None,
    on_step: Optional[StepCallback] = None,
    strict: bool = False,
) -> Tuple[np.ndarray, Dict[int, StepOverflow]]:
    """
    Advance ``M`` chains for ``icfg.steps`` steps.

    Chains that overflow are retired at their last valid state. With ``strict`` the
    first overflow is raised instead.

    Returns
    -------
    Tuple[numpy.ndarray, Dict[int, StepOverflow]]
        Final ``(M, N, d)`` states, and the overflow of each failed chain keyed by
        chain id.
    """
    _points = np.array(points, dtype=float, copy=True)
    _count = _points.shape[0]
    _ids = list(range(_count)) if chain_ids is None else list(chain_ids)
    _active = np.ones(_count, dtype=bool)
    _failures: Dict[int, StepOverflow] = {}

    _block = env.NOISE_BLOCK
    _noise: Optional[np.ndarray] = None
    _t = 0.0

    for _k in range(icfg.steps):
        _beta = float(sched.beta(_t if icfg.time_mode == "sde" else float(_k)))
        _eta = icfg.eta(_k)

        if icfg.noise_on and _k % _block == 0:
            _noise = _draw_noise(noise_rngs, _block, _points.shape[1:])

        _live = np.flatnonzero(_active)
        _xi = _noise[_k % _block, _live] if icfg.noise_on else None
        _moved, _overflow = _step_arrays(
            _points[_live], _beta, _eta, potential, _xi
        )

        if _overflow.any():
            for _index in _live[_overflow]:
                _error = StepOverflow(
                    f"Step {_k} of chain {_ids[_index]} overflowed at beta={_beta:.6g}, "
                    f"eta={_eta:.6g}; the step length reached pi/2.",
                    step=_k,
                    chain=_ids[_index],
                )
                if strict:
                    raise _error
                logger.debug("chain_overflow chain=%d step=%d", _ids[_index], _k)
                _failures[_ids[_index]] = _error

            _active[_live[_overflow]] = False
            _live, _moved = _live[~_overflow], _moved[~_overflow]

        _points[_live] = _moved

        _t += _eta if icfg.time_mode == "sde" else 1.0

        if on_step is not None:
            _retire = on_step(_k + 1, _t, _points, _active)
            if _retire is not None:
                _active &= ~_retire

        if not _active.any():
            break

    return _points, _failures


# ======================================================================================
# Public operations


def sgld_step(
    z: Configuration,
    k: int,
    sched: Schedule,
    icfg: IntegratorConfig,
    potential: Potential,
    rng: np.random.Generator,
) -> Configuration:
    """
    One annealed SGLD step from ``z`` at step index ``k``.

    Parameters
    ----------
    z : Configuration
        Current state.

    k : int
        Step index; sets :math:`\\eta_k` and the schedule clock.

    sched : Schedule
        The annealing schedule.

    icfg : IntegratorConfig
        Step-size law and noise switch.

    potential : Potential
        The drift potential.

    rng : numpy.random.Generator
        Source of the Gaussian noise.

    Returns
    -------
    Configuration
        The next state.

    Raises
    ------
    StepOverflow
        If any point's step is at least pi/2 long.
    """
    _beta = float(sched.beta(sde_time(icfg, k)))
    _eta = icfg.eta(k)
    _xi = rng.standard_normal((1,) + z.points.shape) if icfg.noise_on else None

    _moved, _overflow = _step_arrays(z.points[None], _beta, _eta, potential, _xi)

    if _overflow[0]:
        raise StepOverflow(
            f"Step {k} overflowed at beta={_beta:.6g}, eta={_eta:.6g}; the step length "
            f"reached pi/2.",
            step=k,
        )

    return Configuration(_moved[0])


def run_trajectory(
    z0: Configuration,
    sched: Schedule,
    icfg: IntegratorConfig,
    potential: Potential,
    *,
    noise_rng: Optional[np.random.Generator] = None,
) -> Trajectory:
    """
    Run one chain from ``z0`` and record it.

    Parameters
    ----------
    z0 : Configuration
        Initial state; it is the first record.

    sched : Schedule
        The annealing schedule.

    icfg : IntegratorConfig
        Step-size law, run length, recording stride and seed.

    potential : Potential
        The drift potential; it also supplies the recorded loss and :math:`U_0`.

    noise_rng : numpy.random.Generator | None
        Noise stream. Defaults to the noise stream of chain 0 of ``icfg.seed``, the
        same stream chain 0 of an ensemble uses.

    Returns
    -------
    Trajectory
        ``ceil(steps / record_every) + 1`` records.

    Raises
    ------
    StepOverflow
        With the offending step index.

    Examples
    --------
    >>> from annealab.landscapes import (
    ...     LandscapePotential, SymmetricDoubleWell, landscape_configuration,
    ... )
    >>> from annealab.schedules import Constant
    >>> trajectory = run_trajectory(
    ...     landscape_configuration(1.4),
    ...     Constant(6.0),
    ...     IntegratorConfig(eta0=0.01, steps=10, noise_on=False),
    ...     LandscapePotential(SymmetricDoubleWell()),
    ... )
    >>> len(trajectory)
    11
    """
    if noise_rng is None:
        noise_rng = chain_streams(icfg.seed, 0)[1]

    _records: Dict[str, list] = {
        "times": [],
        "sde_times": [],
        "states": [],
        "beta_values": [],
        "loss_values": [],
        "u0_values": [],
    }

    def _record(k: int, t: float, points: np.ndarray):
        _beta = float(sched.beta(t if icfg.time_mode == "sde" else float(k)))
        _records["times"].append(k)
        _records["sde_times"].append(t)
        _records["states"].append(Configuration(points[0].copy()))
        _records["beta_values"].append(_beta)
        _records["loss_values"].append(float(potential.loss(points[0], _beta)))
        _records["u0_values"].append(float(potential.limiting(points[0])))

    def _on_step(k: int, t: float, points: np.ndarray, active: np.ndarray):
        if k % icfg.record_every == 0 or k == icfg.steps:
            _record(k, t, points)

    _record(0, 0.0, z0.points[None])
    advance(
        z0.points[None],
        sched,
        icfg,
        potential,
        [noise_rng],
        on_step=_on_step,
        strict=True,
    )

    logger.debug(
        "trajectory steps=%d records=%d", icfg.steps, len(_records["states"])
    )

    return Trajectory(
        times=np.array(_records["times"], dtype=int),
        sde_times=np.array(_records["sde_times"]),
        states=_records["states"],
        beta_values=np.array(_records["beta_values"]),
        loss_values=np.array(_records["loss_values"]),
        u0_values=np.array(_records["u0_values"]),
        time_mode=icfg.time_mode,
    )
