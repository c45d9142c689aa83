# -*- coding: utf-8 -*-
"""
==================
 Experiment runner
==================

:func:`run_experiment` executes one validated :class:`ExperimentConfig` and writes its
tables, plots and ``manifest.json`` under ``cfg.out``.

Every file is rendered in memory and written atomically, after all chains of the
experiment have been aggregated in chain order, so a failure never leaves a
half-written file. Every sweep point (inverse temperature, annealing rate) draws
from a seed derived from the master seed and its position, so identical configs
reproduce byte-identical tables whatever the worker count, and interrupted sweeps
resume from their :class:`~annealab.classes.SweepCheckpoint`.
"""
import logging
import math
import os
import shutil
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .. import __version__
from ..classes import LocalStorage, SweepCheckpoint
from ..config import env
from ..config.experiment import ExperimentConfig
from ..diagnostics import (
    FailurePoint,
    SuccessFraction,
    arrhenius_fit,
    critical_failure_exponent,
    equilibrium_histogram,
    estimate_exit_times,
    failure_curve,
    gibbs_reference_density,
    sharpening_fit,
    sharpening_norms,
    success_fraction,
    total_variation,
)
from ..diagnostics.oracles import gradient_errors, hessian_errors, random_instance
from ..dynamics import run_ensemble
from ..exceptions import (
    AnnealabError,
    InsufficientData,
    NotSuboptimal,
    ValidationError,
)
from ..geometry import Configuration, wrap_angle
from ..landscapes import (
    BasinLabel,
    LandscapePotential,
    angle_init,
    configuration_angle,
    deepest_suboptimal_basin,
    escape_prefactor,
    uniform_angle_init,
)
from ..potential import PairSet
from ..schedules import Logarithmic, classify_schedule
from ..utils.io import sha256_file, write_csv, write_json
from ..utils.seeding import derive_seed
from . import plots

logger = logging.getLogger(__name__)

MANIFEST_NAME: str = "manifest.json"

STAGING_PREFIX: str = ".annealab-staging-"
"""
Prefix of the temporary directory a run writes into before its outputs are moved
under ``cfg.out``.
"""

HEADERS: Dict[str, Tuple[str, ...]] = {
    "equilibrium.csv": (
        "bin_index",
        "bin_center_rad",
        "empirical_freq",
        "gibbs_ref",
        "abs_diff",
    ),
    "escape.csv": ("beta", "chain", "exit_step", "censored"),
    "arrhenius.csv": ("beta", "mean_exit", "ci_low", "ci_high", "log_mean_exit"),
    "anneal.csv": ("c", "chain", "final_angle_or_dist", "success", "final_u0"),
    "anneal_checkpoints.csv": ("c", "step", "failure_fraction", "ci_low", "ci_high"),
    "sharpening.csv": ("beta", "hessian_spectral_norm"),
    "gradcheck.csv": ("trial", "kind", "n", "d", "beta", "max_rel_err"),
    "hessian_check.csv": (
        "trial",
        "kind",
        "n",
        "d",
        "beta",
        "max_rel_err",
        "symmetry_defect",
    ),
}
"""
Header row of every result table.
"""


@dataclass(frozen=True)
class RunManifest:
    """
    Record of one run: what was asked, by which version, and what was written.

    Parameters
    ----------
    experiment : str
        Experiment kind.

    version : str
        :data:`annealab.__version__`.

    seed : int
        Effective master seed.

    config : Dict[str, Any]
        The configuration as parsed from its file.

    config_sha256 : str
        Digest of the canonical configuration and seed.

    duration_s : float
        Wall-clock duration of the run.

    files : Dict[str, str]
        Lowercase hex SHA-256 of every emitted file, by file name.

    summary : Dict[str, Any]
        Fitted and aggregated values of the experiment.
    """

    experiment: str
    version: str
    seed: int
    config: Dict[str, Any]
    config_sha256: str
    duration_s: float
    files: Dict[str, str] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class _Outputs:
    """
    Files and summary values accumulated by one experiment.
    """

    out: Path
    files: List[Path] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def table(self, name: str, rows: List[Tuple[Any, ...]]) -> Path:
        _path = write_csv(self.out / name, HEADERS[name], rows)
        self.files.append(_path)
        logger.info("table_written file=%s rows=%d", name, len(rows))

        return _path

    def plot(self, name: str, draw: Callable[[Path], Path]) -> Path:
        _path = draw(self.out / name)
        self.files.append(_path)

        return _path


def _finite_or_none(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


def _checkpoint(cfg: ExperimentConfig) -> SweepCheckpoint:
    return (
        SweepCheckpoint(f"{cfg.kind}-{cfg.digest[:16]}")
        .uses(LocalStorage.under(cfg.out))
        .reset_if(lambda: env.RESET_CACHE)
    )


def _sweep(values, description: str, progress: bool):
    return tqdm(
        list(enumerate(values)),
        desc=description,
        unit="point",
        disable=not progress,
        leave=False,
    )


# ======================================================================================
# Equilibrium


def _run_equilibrium(cfg: ExperimentConfig, outputs: _Outputs, progress: bool):
    _spec = cfg.landscape
    _beta = cfg.schedule.beta0
    _section = cfg.equilibrium

    _histogram = equilibrium_histogram(
        _spec,
        _beta,
        cfg.integrator,
        bins=_section.bins,
        burn_in=_section.burn_in,
        chains=cfg.ensemble.chains,
    )
    _reference = gibbs_reference_density(
        _spec, _beta, bins=_section.bins, grid=_section.grid
    )
    _empirical = _histogram.frequencies
    _centers = _histogram.centers

    outputs.table(
        "equilibrium.csv",
        [
            (
                _index,
                float(_centers[_index]),
                float(_empirical[_index]),
                float(_reference[_index]),
                float(abs(_empirical[_index] - _reference[_index])),
            )
            for _index in range(_section.bins)
        ],
    )
    outputs.plot(
        "equilibrium.svg",
        lambda path: plots.plot_equilibrium(
            path, _centers, _empirical, _reference, _beta
        ),
    )

    _tv = total_variation(_histogram, _reference)
    logger.info("equilibrium beta=%g tv=%.6g samples=%d", _beta, _tv, _histogram.total)

    outputs.summary.update(
        beta=_beta, total_variation=_tv, samples=_histogram.total
    )


# ======================================================================================
# Escape times


def _start_basin(cfg: ExperimentConfig) -> BasinLabel:
    _spec = cfg.landscape
    _index = cfg.escape.start_basin

    if _index is None:
        try:
            return deepest_suboptimal_basin(_spec)
        except NotSuboptimal:
            return BasinLabel(0)

    if _index >= len(_spec.minima):
        raise ValidationError(
            [
                f"escape.start_basin: must be < {len(_spec.minima)}, the number of "
                f"basins of the landscape; got {_index}."
            ]
        )

    return BasinLabel(_index)


def _run_escape(cfg: ExperimentConfig, outputs: _Outputs, progress: bool):
    _spec = cfg.landscape
    _section = cfg.escape
    _basin = _start_basin(cfg)

    with _checkpoint(cfg) as _cp:
        for _index, _beta in _sweep(_section.betas, "escape", progress):
            if _beta in _cp:
                continue

            _cp.record(
                _beta,
                estimate_exit_times(
                    _spec,
                    _beta,
                    _basin,
                    cfg.ensemble.chains,
                    _section.horizon,
                    cfg.integrator.with_changes(seed=derive_seed(cfg.seed, _index)),
                    workers=cfg.ensemble.workers,
                ),
            )

        _estimates = [_cp[_beta] for _beta in _section.betas]

    outputs.table(
        "escape.csv",
        [
            (_estimate.beta, _sample.chain, _sample.exit_step, _sample.censored)
            for _estimate in _estimates
            for _sample in _estimate.samples
        ],
    )
    outputs.table(
        "arrhenius.csv",
        [
            (
                _estimate.beta,
                _estimate.mean,
                _estimate.ci_low,
                _estimate.ci_high,
                _estimate.log_mean,
            )
            for _estimate in _estimates
        ],
    )

    _summary: Dict[str, Any] = {
        "start_basin": str(_basin),
        "exit_barrier": _finite_or_none(_spec.exit_barrier(_basin)),
        "censored": sum(_estimate.censored for _estimate in _estimates),
        "slope": None,
        "intercept": None,
        "predicted_intercept": None,
    }

    try:
        _fit = arrhenius_fit([(_e.beta, _e.mean) for _e in _estimates])
        _summary.update(slope=_fit.slope, intercept=_fit.intercept)
    except InsufficientData as e:
        logger.warning("arrhenius_fit_skipped reason=%s", e)
        _fit = None

    try:
        _summary["predicted_intercept"] = -math.log(escape_prefactor(_spec, _basin))
    except AnnealabError as e:
        logger.info("kramers_prefactor_unavailable reason=%s", e)

    outputs.plot(
        "arrhenius.svg",
        lambda path: plots.plot_arrhenius(
            path,
            [_e.beta for _e in _estimates],
            [_e.log_mean for _e in _estimates],
            [math.log(_e.ci_low) for _e in _estimates],
            [math.log(_e.ci_high) for _e in _estimates],
            slope=_fit.slope if _fit else math.nan,
            intercept=_fit.intercept if _fit else math.nan,
        ),
    )

    outputs.summary.update(_summary)


# ======================================================================================
# Annealing sweep


@dataclass(frozen=True)
class _AnnealPoint:
    c: float
    rows: Tuple[Tuple[Any, ...], ...]
    success: SuccessFraction
    curve: Tuple[FailurePoint, ...]


def _anneal_rates(cfg: ExperimentConfig, c_star: float) -> List[float]:
    _section = cfg.anneal

    if not _section.rates:
        return [cfg.schedule.c]

    if _section.rate_unit == "absolute":
        return list(_section.rates)

    if not math.isfinite(c_star):
        raise ValidationError(
            [
                "anneal.rate_unit: rates relative to the critical rate need a "
                "landscape with a suboptimal basin; use 'absolute'."
            ]
        )

    return [rate * c_star for rate in _section.rates]


def _anneal_point(cfg: ExperimentConfig, index: int, c: float) -> _AnnealPoint:
    _spec = cfg.landscape
    _section = cfg.anneal
    _global_angles = np.array(
        [
            _minimum.angle
            for _index, _minimum in enumerate(_spec.minima)
            if _spec.is_global(BasinLabel(_index))
        ]
    )

    def _distance(theta: float) -> float:
        return float(np.min(np.abs(wrap_angle(theta - _global_angles))))

    def _succeeds(points: np.ndarray) -> bool:
        _theta = float(configuration_angle(points))

        if _section.success == "epsilon":
            return _distance(_theta) <= cfg.epsilon

        return _spec.is_global(BasinLabel(int(_spec.basin_indices(_theta))))

    if _section.start == "shallow":
        _init = angle_init(_spec.minima[deepest_suboptimal_basin(_spec).index].angle)
    else:
        _init = uniform_angle_init()

    _ensemble = run_ensemble(
        cfg.ensemble.chains,
        _init,
        Logarithmic(c=c, K=cfg.schedule.K),
        cfg.integrator.with_changes(seed=derive_seed(cfg.seed, index)),
        LandscapePotential(_spec),
        checkpoints=_section.checkpoints,
        workers=cfg.ensemble.workers,
    )

    _failed = _ensemble.failed
    _rows = []
    for _chain in range(_ensemble.chains):
        _theta = float(configuration_angle(_ensemble.final_states[_chain]))
        _rows.append(
            (
                c,
                _chain,
                _distance(_theta) if _section.success == "epsilon" else _theta,
                bool(not _failed[_chain] and _succeeds(_ensemble.final_states[_chain])),
                float(_spec.value(_theta)),
            )
        )

    return _AnnealPoint(
        c=c,
        rows=tuple(_rows),
        success=success_fraction(_ensemble, _succeeds),
        curve=tuple(failure_curve(_ensemble, _succeeds)),
    )


def _run_anneal(cfg: ExperimentConfig, outputs: _Outputs, progress: bool):
    _spec = cfg.landscape
    _report = _spec.barriers
    _critical = _report.critical
    _rates = _anneal_rates(cfg, _report.c_star)

    if cfg.anneal.start == "shallow" and not _report.suboptimal:
        raise NotSuboptimal(
            f"{_spec!r} has no suboptimal basin to start the chains in; use "
            f"anneal.start = 'uniform'."
        )

    with _checkpoint(cfg) as _cp:
        for _index, _c in _sweep(_rates, "anneal", progress):
            if _c not in _cp:
                _cp.record(_c, _anneal_point(cfg, _index, _c))

        _points: List[_AnnealPoint] = [_cp[_c] for _c in _rates]

    outputs.table("anneal.csv", [_row for _point in _points for _row in _point.rows])

    if cfg.anneal.checkpoints:
        outputs.table(
            "anneal_checkpoints.csv",
            [
                (
                    _point.c,
                    _failure.step,
                    _failure.failure_fraction,
                    _failure.ci_low,
                    _failure.ci_high,
                )
                for _point in _points
                for _failure in _point.curve
            ],
        )

    outputs.plot(
        "anneal.svg",
        lambda path: plots.plot_anneal(
            path,
            _rates,
            [_point.success.fraction for _point in _points],
            [_point.success.ci_low for _point in _points],
            [_point.success.ci_high for _point in _points],
            _report.c_star,
        ),
    )

    _sweep_summary = []
    for _point in _points:
        _entry = {
            "c": _point.c,
            "c_over_c_star": _finite_or_none(_point.c / _report.c_star),
            "class": classify_schedule(
                Logarithmic(c=_point.c, K=cfg.schedule.K), _critical
            ).value,
            "success_fraction": _point.success.fraction,
            "ci_low": _point.success.ci_low,
            "ci_high": _point.success.ci_high,
            "failure_exponent": None,
        }

        try:
            _entry["failure_exponent"] = -critical_failure_exponent(
                _point.curve, cfg.schedule.K, eta=cfg.integrator.eta0
            ).slope
        except InsufficientData:
            pass

        logger.info(
            "anneal_point c=%g success=%.4f", _point.c, _point.success.fraction
        )
        _sweep_summary.append(_entry)

    outputs.summary.update(
        delta_e_max=_report.delta_e_max,
        c_star=_finite_or_none(_report.c_star),
        rates=_sweep_summary,
    )


# ======================================================================================
# Sharpening


def _run_sharpening(cfg: ExperimentConfig, outputs: _Outputs, progress: bool):
    _section = cfg.sharpening
    _z = Configuration(np.asarray(_section.points, dtype=float))
    _pairs = PairSet.of(len(_section.points), _section.pairs)

    _norms = sharpening_norms(_z, _section.betas, _section.kind, _pairs, _section.pair)

    outputs.table(
        "sharpening.csv",
        [(_beta, float(_norm)) for _beta, _norm in zip(_section.betas, _norms)],
    )

    try:
        _slope = sharpening_fit(
            _z, _section.betas, _section.kind, _pairs, _section.pair
        ).slope
    except InsufficientData as e:
        logger.warning("sharpening_fit_skipped reason=%s", e)
        _slope = math.nan

    outputs.plot(
        "sharpening.svg",
        lambda path: plots.plot_sharpening(path, _section.betas, _norms, _slope),
    )

    outputs.summary.update(slope=_finite_or_none(_slope))


# ======================================================================================
# Oracles


def _run_gradcheck(cfg: ExperimentConfig, outputs: _Outputs, progress: bool):
    _section = cfg.gradcheck
    _rng = np.random.default_rng(cfg.seed)
    _draw = dict(
        n_range=_section.n_range, d_range=_section.d_range, betas=_section.betas
    )

    _gradient_rows = []
    for _trial in tqdm(
        range(_section.trials), desc="gradient", disable=not progress, leave=False
    ):
        _instance = random_instance(_rng, **_draw)
        _error = gradient_errors(_instance, 1, _rng)[0]
        _gradient_rows.append(
            (
                _trial,
                _instance.kind.name,
                _instance.n,
                _instance.d,
                _instance.beta,
                _error,
            )
        )

    _hessian_rows = []
    for _trial in tqdm(
        range(_section.hessian_trials),
        desc="hessian",
        disable=not progress,
        leave=False,
    ):
        _instance = random_instance(_rng, **_draw)
        _check = hessian_errors(_instance, 1, _rng)[0]
        _hessian_rows.append(
            (
                _trial,
                _instance.kind.name,
                _instance.n,
                _instance.d,
                _instance.beta,
                _check.max_rel_err,
                _check.symmetry_defect,
            )
        )

    outputs.table("gradcheck.csv", _gradient_rows)
    outputs.table("hessian_check.csv", _hessian_rows)
    outputs.plot(
        "gradcheck.svg",
        lambda path: plots.plot_gradcheck(
            path,
            [_row[-1] for _row in _gradient_rows],
            [_row[-2] for _row in _hessian_rows],
        ),
    )

    _max_gradient = max(_row[-1] for _row in _gradient_rows)
    _max_hessian = max(_row[-2] for _row in _hessian_rows)
    _max_defect = max(_row[-1] for _row in _hessian_rows)

    for _name, _value, _tolerance in (
        ("gradient", _max_gradient, _section.tolerance),
        ("hessian", _max_hessian, _section.hessian_tolerance),
    ):
        if _value > _tolerance:
            logger.warning(
                "oracle_failed oracle=%s max_rel_err=%.3e tolerance=%.1e",
                _name,
                _value,
                _tolerance,
            )

    outputs.summary.update(
        max_gradient_rel_err=_max_gradient,
        max_hessian_rel_err=_max_hessian,
        max_symmetry_defect=_max_defect,
        gradient_passed=_max_gradient <= _section.tolerance,
        hessian_passed=_max_hessian <= _section.hessian_tolerance,
    )


RUNNERS: Dict[str, Callable[[ExperimentConfig, _Outputs, bool], None]] = {
    "equilibrium": _run_equilibrium,
    "escape": _run_escape,
    "anneal-sweep": _run_anneal,
    "sharpening": _run_sharpening,
    "gradcheck": _run_gradcheck,
}


def run_experiment(cfg: ExperimentConfig, *, progress: bool = False) -> RunManifest:
    """
    Run one experiment and write its outputs under ``cfg.out``.

    Parameters
    ----------
    cfg : ExperimentConfig
        A validated configuration.

    progress : bool
        Show :mod:`tqdm` progress bars over sweep points.

    Returns
    -------
    RunManifest
        Also written to ``<out>/manifest.json``.

    Raises
    ------
    AnnealabError
        Any error of the numerical modules, after logging the experiment context.
        A failed run writes nothing under ``cfg.out`` except its sweep checkpoint;
        outputs of an earlier run are left as they were.
    """
    _started = time.perf_counter()
    cfg.out.mkdir(parents=True, exist_ok=True)

    logger.info(
        "experiment_started kind=%s seed=%d out=%s digest=%s",
        cfg.kind,
        cfg.seed,
        cfg.out,
        cfg.digest[:16],
    )

    # Outputs are staged next to their destination and only moved in once the
    # manifest exists; a failed run leaves the previous outputs untouched.
    _staging = Path(tempfile.mkdtemp(prefix=STAGING_PREFIX, dir=cfg.out))
    _outputs = _Outputs(out=_staging)

    try:
        RUNNERS[cfg.kind](cfg, _outputs, progress)

        _manifest = RunManifest(
            experiment=cfg.kind,
            version=__version__,
            seed=cfg.seed,
            config=cfg.source,
            config_sha256=cfg.digest,
            duration_s=round(time.perf_counter() - _started, 3),
            files={_path.name: sha256_file(_path) for _path in _outputs.files},
            summary=_outputs.summary,
        )
        _manifest_path = write_json(_staging / MANIFEST_NAME, _manifest.to_dict())

        for _path in [*_outputs.files, _manifest_path]:
            os.replace(_path, cfg.out / _path.name)
    except Exception as e:
        logger.error(
            "experiment_failed kind=%s seed=%d error=%s: %s",
            cfg.kind,
            cfg.seed,
            type(e).__name__,
            e,
        )
        raise
    finally:
        shutil.rmtree(_staging, ignore_errors=True)

    logger.info(
        "experiment_finished kind=%s files=%d duration_s=%.3f",
        cfg.kind,
        len(_manifest.files),
        _manifest.duration_s,
    )

    return _manifest
