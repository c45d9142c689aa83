# -*- coding: utf-8 -*-
"""
=================
 Seeded ensembles
=================

Independent chains of the integrator, each with its own streams derived from
``(master seed, chain index)``.

Chains are advanced in fixed blocks of :data:`~annealab.config.env.CHAIN_BLOCK`
chains; blocks are fanned out to worker threads and reassembled by chain index, so
the result never depends on the number of workers or the order blocks finish in.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import env
from ..exceptions import AnnealabError
from ..geometry import Configuration, sample_uniform_configuration
from ..potential import Potential
from ..schedules import Schedule
from ..utils.seeding import chain_streams
from .integrator import IntegratorConfig, advance

logger = logging.getLogger(__name__)

InitialCondition = Callable[[int, int, np.random.Generator], np.ndarray]
"""
``init(chain, chains, rng)`` returns the ``(N, d)`` initial state of ``chain`` out of
``chains``, drawing any randomness from ``rng``.
"""

StopRule = Callable[[np.ndarray], np.ndarray]
"""
Vectorised over ``(M, N, d)`` states; ``True`` retires a chain at the current step.
"""


@dataclass(frozen=True)
class EnsembleResult:
    """
    Outcome of :func:`run_ensemble`, indexed by chain.

    Parameters
    ----------
    master_seed : int
        Seed every chain stream was derived from.

    chains : int
        Number of chains ``M``.

    time_mode : str
        Clock of the schedule, see :class:`~annealab.dynamics.IntegratorConfig`.

    final_states : numpy.ndarray
        ``(M, N, d)`` states at the end of the run, at the exit step for stopped
        chains, or at the last valid step for failed ones.

    labels : List[Any]
        ``classifier`` of each final state; ``None`` for failed chains.

    exit_steps : numpy.ndarray
        Step count at which each chain was stopped, ``-1`` if it never was.

    exit_times : numpy.ndarray
        Schedule clock at the exit, ``nan`` if the chain never stopped.

    failures : Dict[int, str]
        Error message of every chain that failed.

    checkpoints : Dict[int, numpy.ndarray]
        ``(M, N, d)`` snapshots at the requested steps.
    """

    master_seed: int
    chains: int
    time_mode: str
    final_states: np.ndarray
    labels: List[Any]
    exit_steps: np.ndarray
    exit_times: np.ndarray
    failures: Dict[int, str] = field(default_factory=dict)
    checkpoints: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def stopped(self) -> np.ndarray:
        return self.exit_steps >= 0

    @property
    def failed(self) -> np.ndarray:
        _failed = np.zeros(self.chains, dtype=bool)
        _failed[list(self.failures)] = True

        return _failed

    def final(self, chain: int) -> Configuration:
        return Configuration(self.final_states[chain])


# ======================================================================================
# Initial conditions


def fixed_init(z: Configuration) -> InitialCondition:
    """
    Every chain starts at ``z``.
    """
    _points = z.points

    def _init(chain: int, chains: int, rng: np.random.Generator) -> np.ndarray:
        return _points.copy()

    return _init


def uniform_init(n: int, d: int) -> InitialCondition:
    """
    Every chain starts at an independent uniform configuration.
    """

    def _init(chain: int, chains: int, rng: np.random.Generator) -> np.ndarray:
        return sample_uniform_configuration(n, d, rng).points

    return _init


# ======================================================================================
# Runner


@dataclass
class _Block:
    chain_ids: List[int]
    final_states: Optional[np.ndarray] = None
    exit_steps: Optional[np.ndarray] = None
    exit_times: Optional[np.ndarray] = None
    failures: Dict[int, str] = field(default_factory=dict)
    checkpoints: Dict[int, np.ndarray] = field(default_factory=dict)


def _run_block(
    block: _Block,
    chains: int,
    init: InitialCondition,
    sched: Schedule,
    icfg: IntegratorConfig,
    potential: Potential,
    stop_when: Optional[StopRule],
    checkpoints: Tuple[int, ...],
) -> _Block:
    _streams = [chain_streams(icfg.seed, chain) for chain in block.chain_ids]
    _points = np.stack(
        [
            np.asarray(init(chain, chains, streams[0]), dtype=float)
            for chain, streams in zip(block.chain_ids, _streams)
        ]
    )

    _exit_steps = np.full(len(block.chain_ids), -1, dtype=int)
    _exit_times = np.full(len(block.chain_ids), np.nan)

    def _on_step(k: int, t: float, points: np.ndarray, active: np.ndarray):
        if k in checkpoints:
            block.checkpoints[k] = points.copy()

        if stop_when is None:
            return None

        _live = np.flatnonzero(active)
        _stop = np.zeros(len(active), dtype=bool)
        _stop[_live] = stop_when(points[_live])
        _exit_steps[_stop] = k
        _exit_times[_stop] = t

        return _stop

    if 0 in checkpoints:
        block.checkpoints[0] = _points.copy()

    _final, _failures = advance(
        _points,
        sched,
        icfg,
        potential,
        [streams[1] for streams in _streams],
        chain_ids=block.chain_ids,
        on_step=_on_step,
    )

    # Chains stopped before a checkpoint keep their exit state in later snapshots.
    for _step in checkpoints:
        if _step not in block.checkpoints and _step <= icfg.steps:
            block.checkpoints[_step] = _final.copy()

    block.final_states = _final
    block.exit_steps = _exit_steps
    block.exit_times = _exit_times
    block.failures = {chain: str(error) for chain, error in _failures.items()}

    return block


def _run_block_guarded(block: _Block, *args) -> _Block:
    try:
        return _run_block(block, *args)
    except (AnnealabError, ArithmeticError) as e:
        logger.warning(
            "block_failed chains=%d-%d error=%s",
            block.chain_ids[0],
            block.chain_ids[-1],
            e,
        )
        block.failures = {chain: str(e) for chain in block.chain_ids}

        return block


def run_ensemble(
    m: int,
    init: InitialCondition,
    sched: Schedule,
    icfg: IntegratorConfig,
    potential: Potential,
    classifier: Optional[Callable[[np.ndarray], Any]] = None,
    *,
    stop_when: Optional[StopRule] = None,
    checkpoints: Sequence[int] = (),
    workers: Optional[int] = None,
) -> EnsembleResult:
    """
    Run ``m`` independent chains and collect their outcomes.

    Parameters
    ----------
    m : int
        Number of chains, ``>= 1``.

    init : InitialCondition
        Initial state of every chain, drawn from the chain's own stream.

    sched : Schedule
        The annealing schedule.

    icfg : IntegratorConfig
        Step-size law and run length; ``icfg.seed`` is the master seed.

    potential : Potential
        The drift potential.

    classifier : Callable[[numpy.ndarray], Any] | None
        Applied to each chain's ``(N, d)`` final state to produce its label.

    stop_when : StopRule | None
        Checked after every step; chains it flags are stopped and their exit step
        and time recorded.

    checkpoints : Sequence[int]
        Step counts at which every chain is snapshot.

    workers : int | None
        Worker threads; defaults to :data:`~annealab.config.env.WORKERS`.

    Returns
    -------
    EnsembleResult
        Per-chain outcomes. Chains that fail are reported in ``failures`` and do not
        abort the others.
    """
    if m < 1:
        raise ValueError(f"An ensemble needs m >= 1 chains; got {m}.")

    _workers = max(workers or env.WORKERS, 1)
    _checkpoints = tuple(sorted({int(step) for step in checkpoints}))
    _blocks = [
        _Block(chain_ids=list(range(start, min(start + env.CHAIN_BLOCK, m))))
        for start in range(0, m, env.CHAIN_BLOCK)
    ]

    logger.debug(
        "ensemble chains=%d blocks=%d workers=%d steps=%d",
        m,
        len(_blocks),
        _workers,
        icfg.steps,
    )

    _args = (m, init, sched, icfg, potential, stop_when, _checkpoints)
    with ThreadPoolExecutor(max_workers=_workers) as executor:
        _blocks = list(
            executor.map(lambda block: _run_block_guarded(block, *_args), _blocks)
        )

    return _assemble(m, icfg, classifier, _blocks, _checkpoints)


def _assemble(
    m: int,
    icfg: IntegratorConfig,
    classifier: Optional[Callable[[np.ndarray], Any]],
    blocks: List[_Block],
    checkpoints: Tuple[int, ...],
) -> EnsembleResult:
    _final_states: List[np.ndarray] = []
    _exit_steps: List[np.ndarray] = []
    _exit_times: List[np.ndarray] = []
    _failures: Dict[int, str] = {}

    for _block in blocks:
        _size = len(_block.chain_ids)
        if _block.final_states is None:
            _final_states.append(np.full((_size,) + _shape_of(blocks), np.nan))
            _exit_steps.append(np.full(_size, -1, dtype=int))
            _exit_times.append(np.full(_size, np.nan))
        else:
            _final_states.append(_block.final_states)
            _exit_steps.append(_block.exit_steps)
            _exit_times.append(_block.exit_times)
        _failures.update(_block.failures)

    _states = np.concatenate(_final_states)
    _labels = [
        None
        if chain in _failures or classifier is None
        else classifier(_states[chain])
        for chain in range(m)
    ]

    _missing = lambda block: np.full(  # noqa: E731
        (len(block.chain_ids),) + _shape_of(blocks), np.nan
    )
    _snapshots = {
        step: np.concatenate(
            [_block.checkpoints.get(step, _missing(_block)) for _block in blocks]
        )
        for step in checkpoints
        if step <= icfg.steps
    }

    if _failures:
        logger.warning("ensemble_failures count=%d of=%d", len(_failures), m)

    return EnsembleResult(
        master_seed=icfg.seed,
        chains=m,
        time_mode=icfg.time_mode,
        final_states=_states,
        labels=_labels,
        exit_steps=np.concatenate(_exit_steps),
        exit_times=np.concatenate(_exit_times),
        failures=dict(sorted(_failures.items())),
        checkpoints=_snapshots,
    )


def _shape_of(blocks: List[_Block]) -> Tuple[int, ...]:
    for _block in blocks:
        if _block.final_states is not None:
            return _block.final_states.shape[1:]

    return (0, 0)
