# -*- coding: utf-8 -*-
"""
=========================
 Experiment Configuration
=========================
One JSON file describes one run. :func:`load_config` parses it into a frozen
:class:`ExperimentConfig`, filling documented defaults, and reports every problem at
once: :class:`~annealab.exceptions.ParseError` for malformed input (syntax, wrong
types, unknown keys, unknown enum values), otherwise
:class:`~annealab.exceptions.ValidationError` for broken invariants.

See ``docs/config_schema.md`` for the schema.
"""
import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from ..exceptions import (
    AnnealabError,
    InvalidIntegrator,
    InvalidSchedule,
    ParseError,
    ValidationError,
)
from ..dynamics import IntegratorConfig
from ..landscapes import (
    LANDSCAPE_FAMILIES,
    LandscapeSpec,
    landscape_from_dict,
)
from ..potential import SIMILARITY_KINDS, PairSet, SimilarityKind, similarity_from_dict
from ..schedules import SCHEDULES, Constant, Logarithmic, Schedule, schedule_from_dict
from ..utils.io import sha256_text
from ..utils.seeding import MAX_SEED

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS: Tuple[str, ...] = (
    "equilibrium",
    "escape",
    "anneal-sweep",
    "sharpening",
    "gradcheck",
)

DEFAULT_OUT: str = "results"


@dataclass(frozen=True)
class EnsembleSection:
    chains: int = 100
    workers: Optional[int] = None


@dataclass(frozen=True)
class EquilibriumSection:
    bins: int = 64
    burn_in: float = 0.1
    grid: int = 32768


@dataclass(frozen=True)
class EscapeSection:
    """
    ``start_basin`` indexes the landscape's minima by angle; ``None`` picks the
    deepest suboptimal basin, or the first basin when every basin is global.
    """

    betas: Tuple[float, ...]
    horizon: int
    start_basin: Optional[int] = None


@dataclass(frozen=True)
class AnnealSection:
    """
    ``rates`` are logarithmic rates ``c``, in units of ``c*`` when ``rate_unit`` is
    ``"critical"``. ``start`` is ``"shallow"`` (the deepest suboptimal minimum) or
    ``"uniform"``. Success is membership of a global basin (``"basin"``) or being
    within ``epsilon`` of a global minimum (``"epsilon"``).
    """

    RATE_UNITS = ("critical", "absolute")
    STARTS = ("shallow", "uniform")
    SUCCESS = ("basin", "epsilon")

    rates: Tuple[float, ...] = ()
    rate_unit: str = "critical"
    start: str = "shallow"
    success: str = "basin"
    checkpoints: Tuple[int, ...] = ()


@dataclass(frozen=True)
class SharpeningSection:
    """
    Defaults to a planar-in-3d Gaussian instance where the anchor's nearest
    candidate is a negative.
    """

    betas: Tuple[float, ...] = (10.0, 18.0, 32.0, 56.0, 100.0)
    kind: SimilarityKind = dataclasses.field(
        default_factory=lambda: similarity_from_dict({"name": "gaussian", "sigma": 1.0})
    )
    points: Tuple[Tuple[float, ...], ...] = (
        (1.0, 0.0, 0.0),
        (math.cos(0.3), math.sin(0.3), 0.0),
        (math.cos(2.0), math.sin(2.0), 0.0),
    )
    pairs: Tuple[Tuple[int, int], ...] = ((0, 2),)
    pair: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class GradcheckSection:
    trials: int = 100
    hessian_trials: int = 20
    tolerance: float = 1e-6
    hessian_tolerance: float = 1e-4
    n_range: Tuple[int, int] = (3, 8)
    d_range: Tuple[int, int] = (2, 4)
    betas: Tuple[float, ...] = (0.5, 5.0, 50.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A fully validated experiment.

    Parameters
    ----------
    kind : str
        One of :data:`EXPERIMENT_KINDS`.

    seed : int
        Master seed; also the integrator's seed.

    out : pathlib.Path
        Output directory.

    landscape : LandscapeSpec | None
        Benchmark landscape of the equilibrium, escape and anneal experiments.

    schedule : Schedule | None
        Annealing schedule: constant for equilibrium, logarithmic for annealing.

    integrator : IntegratorConfig
        Step-size law and run length.

    ensemble : EnsembleSection
        Chain count and worker threads.

    epsilon : float
        Radius, in radians, of the success neighbourhood of the global minima.

    source : Dict[str, Any]
        The parsed JSON, echoed into the run manifest.
    """

    kind: str
    seed: int
    out: Path
    integrator: IntegratorConfig
    ensemble: EnsembleSection
    epsilon: float
    source: Dict[str, Any]
    landscape: Optional[LandscapeSpec] = None
    schedule: Optional[Schedule] = None
    equilibrium: Optional[EquilibriumSection] = None
    escape: Optional[EscapeSection] = None
    anneal: Optional[AnnealSection] = None
    sharpening: Optional[SharpeningSection] = None
    gradcheck: Optional[GradcheckSection] = None

    @property
    def digest(self) -> str:
        """
        SHA-256 of the canonical JSON of the source and the effective seed.
        """
        return sha256_text(
            json.dumps(
                {"config": self.source, "seed": self.seed},
                sort_keys=True,
                separators=(",", ":"),
            )
        )

    def with_overrides(
        self, *, seed: Optional[int] = None, out: Optional[Union[str, Path]] = None
    ) -> "ExperimentConfig":
        """
        Apply the ``--seed`` / ``--out`` command line overrides.
        """
        _changes: Dict[str, Any] = {}

        if seed is not None:
            if not 0 <= seed <= MAX_SEED:
                raise ValidationError([f"seed: must lie in [0, 2**64); got {seed}."])
            _changes["seed"] = int(seed)
            _changes["integrator"] = self.integrator.with_changes(seed=int(seed))

        if out is not None:
            _changes["out"] = Path(out)

        return dataclasses.replace(self, **_changes)


# ======================================================================================
# Parsing


class _Reader:
    """
    Walks the JSON tree, collecting malformed-input and invariant failures.
    """

    def __init__(self):
        self.malformed: List[str] = []
        self.invalid: List[str] = []

    def section(
        self, data: Any, path: str, allowed: Sequence[str]
    ) -> Optional[Dict[str, Any]]:
        if data is None:
            return None

        if not isinstance(data, dict):
            self.malformed.append(
                f"{path}: expected an object; got {type(data).__name__}."
            )
            return None

        for _key in data:
            if _key not in allowed:
                self.malformed.append(
                    f"{path}.{_key}: unknown key; expected one of {tuple(allowed)}."
                    if path
                    else f"{_key}: unknown key; expected one of {tuple(allowed)}."
                )

        return data

    def value(
        self,
        data: Dict[str, Any],
        key: str,
        path: str,
        kind: Union[type, Tuple[type, ...]],
        default: Any = None,
        *,
        required: bool = False,
        check: Optional[Callable[[Any], bool]] = None,
        constraint: str = "",
    ) -> Any:
        _path = f"{path}.{key}" if path else key

        if key not in data:
            if required:
                self.malformed.append(f"{_path}: required.")
            return default

        _value = data[key]

        if not _matches(_value, kind):
            self.malformed.append(
                f"{_path}: expected {_type_name(kind)}; got {json.dumps(_value)}."
            )
            return default

        if check is not None and not check(_value):
            self.invalid.append(f"{_path}: must be {constraint}; got {json.dumps(_value)}.")
            return default

        return _value

    def array(
        self,
        data: Dict[str, Any],
        key: str,
        path: str,
        kind: Union[type, Tuple[type, ...]],
        default: Any = None,
        *,
        required: bool = False,
        check: Optional[Callable[[Any], bool]] = None,
        constraint: str = "",
        min_length: int = 0,
    ) -> Optional[tuple]:
        _values = self.value(data, key, path, list, None, required=required)
        _path = f"{path}.{key}" if path else key

        if _values is None:
            return default

        _ok = True
        for _index, _value in enumerate(_values):
            if not _matches(_value, kind):
                self.malformed.append(
                    f"{_path}[{_index}]: expected {_type_name(kind)}; "
                    f"got {json.dumps(_value)}."
                )
                _ok = False
            elif check is not None and not check(_value):
                self.invalid.append(
                    f"{_path}[{_index}]: must be {constraint}; got {json.dumps(_value)}."
                )
                _ok = False

        if len(_values) < min_length:
            self.invalid.append(
                f"{_path}: needs at least {min_length} entries; got {len(_values)}."
            )
            _ok = False

        return tuple(_values) if _ok else default


def _matches(value: Any, kind: Union[type, Tuple[type, ...]]) -> bool:
    _kinds = kind if isinstance(kind, tuple) else (kind,)

    if isinstance(value, bool):
        return bool in _kinds

    if float in _kinds and isinstance(value, int):
        return True

    return isinstance(value, _kinds)


def _type_name(kind: Union[type, Tuple[type, ...]]) -> str:
    _names = {bool: "a boolean", int: "an integer", float: "a number", str: "a string"}
    _names.update({list: "an array", dict: "an object"})
    _kinds = kind if isinstance(kind, tuple) else (kind,)

    return " or ".join(_names.get(_kind, _kind.__name__) for _kind in _kinds)


def _positive(value: float) -> bool:
    return math.isfinite(value) and value > 0


TOP_LEVEL_KEYS: Tuple[str, ...] = (
    "experiment",
    "seed",
    "out",
    "landscape",
    "schedule",
    "integrator",
    "ensemble",
    "epsilon",
    "equilibrium",
    "escape",
    "anneal",
    "sharpening",
    "gradcheck",
)


def parse_config(data: Any) -> ExperimentConfig:
    """
    Validate an already decoded JSON document.

    Raises
    ------
    ParseError
        On wrong types, unknown keys, unknown enum values or missing sections.

    ValidationError
        On broken invariants, when the document is otherwise well-formed.
    """
    _reader = _Reader()

    if not isinstance(data, dict):
        raise ParseError([f"The configuration must be a JSON object; got {data!r}."])

    _reader.section(data, "", TOP_LEVEL_KEYS)

    _kind = _reader.value(data, "experiment", "", str, required=True)
    if _kind is not None and _kind not in EXPERIMENT_KINDS:
        _reader.malformed.append(
            f"experiment: unknown kind {_kind!r}; expected one of {EXPERIMENT_KINDS}."
        )
        _kind = None

    _seed = _reader.value(
        data,
        "seed",
        "",
        int,
        0,
        check=lambda v: 0 <= v <= MAX_SEED,
        constraint="in [0, 2**64)",
    )
    _out = _reader.value(data, "out", "", str, DEFAULT_OUT)
    _epsilon = _reader.value(
        data, "epsilon", "", float, 0.1, check=_positive, constraint="> 0"
    )

    _integrator = _parse_integrator(_reader, data.get("integrator"), _seed)
    _ensemble = _parse_ensemble(_reader, data.get("ensemble"))
    _landscape = _parse_landscape(_reader, data.get("landscape"))
    _schedule = _parse_schedule(_reader, data.get("schedule"))

    _sections: Dict[str, Any] = {
        "equilibrium": _parse_equilibrium(_reader, data.get("equilibrium")),
        "escape": _parse_escape(_reader, data.get("escape")),
        "anneal": _parse_anneal(_reader, data.get("anneal")),
        "sharpening": _parse_sharpening(_reader, data.get("sharpening")),
        "gradcheck": _parse_gradcheck(_reader, data.get("gradcheck")),
    }

    if _kind is not None:
        _require_sections(_reader, _kind, data, _landscape, _schedule)

    if _reader.malformed:
        raise ParseError(_reader.malformed + _reader.invalid)

    if _reader.invalid:
        raise ValidationError(_reader.invalid)

    return ExperimentConfig(
        kind=_kind,
        seed=int(_seed),
        out=Path(_out),
        integrator=_integrator,
        ensemble=_ensemble,
        epsilon=float(_epsilon),
        source=data,
        landscape=_landscape,
        schedule=_schedule,
        equilibrium=_sections["equilibrium"] or EquilibriumSection(),
        escape=_sections["escape"],
        anneal=_sections["anneal"] or AnnealSection(),
        sharpening=_sections["sharpening"] or SharpeningSection(),
        gradcheck=_sections["gradcheck"] or GradcheckSection(),
    )


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and validate an experiment configuration file.

    Parameters
    ----------
    path : str | pathlib.Path
        UTF-8 JSON file.

    Returns
    -------
    ExperimentConfig
        The validated configuration, defaults filled.

    Raises
    ------
    ParseError
        If the file cannot be read, is not JSON, or is malformed.

    ValidationError
        If it is well-formed but breaks an invariant; every failure is listed.

    Examples
    --------
    A minimal equilibrium run::

        {
            "experiment": "equilibrium",
            "landscape": {"family": "symmetric-double-well"},
            "schedule": {"type": "constant", "beta0": 2.0}
        }
    """
    try:
        _text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError([f"{path}: cannot be read: {e}"]) from None

    try:
        _data = json.loads(_text)
    except json.JSONDecodeError as e:
        raise ParseError(
            [f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}."]
        ) from None

    _config = parse_config(_data)
    logger.debug("config_loaded path=%s kind=%s", path, _config.kind)

    return _config


# ======================================================================================
# Sections


def _require_sections(
    reader: _Reader,
    kind: str,
    data: Dict[str, Any],
    landscape: Optional[LandscapeSpec],
    schedule: Optional[Schedule],
):
    if kind in ("equilibrium", "escape", "anneal-sweep") and "landscape" not in data:
        reader.malformed.append(f"landscape: required by the {kind} experiment.")

    if kind in ("equilibrium", "anneal-sweep") and "schedule" not in data:
        reader.malformed.append(f"schedule: required by the {kind} experiment.")

    if kind == "escape" and "escape" not in data:
        reader.malformed.append("escape: required by the escape experiment.")

    if kind == "equilibrium" and schedule is not None and not isinstance(
        schedule, Constant
    ):
        reader.invalid.append(
            f"schedule.type: must be 'constant' for an equilibrium run; "
            f"got {schedule.kind!r}."
        )

    if kind == "anneal-sweep" and schedule is not None and not isinstance(
        schedule, Logarithmic
    ):
        reader.invalid.append(
            f"schedule.type: must be 'logarithmic' for an anneal sweep; "
            f"got {schedule.kind!r}."
        )


def _parse_integrator(reader: _Reader, data: Any, seed: Any) -> IntegratorConfig:
    _defaults = IntegratorConfig(eta0=1e-3, steps=10_000)
    _data = reader.section(
        data,
        "integrator",
        ("eta0", "eta_decay", "steps", "record_every", "noise_on", "time_mode"),
    )

    if _data is None:
        return _defaults.with_changes(seed=int(seed or 0))

    _fields = {
        "eta0": reader.value(_data, "eta0", "integrator", float, _defaults.eta0),
        "eta_decay": reader.value(
            _data, "eta_decay", "integrator", float, _defaults.eta_decay
        ),
        "steps": reader.value(_data, "steps", "integrator", int, _defaults.steps),
        "record_every": reader.value(
            _data, "record_every", "integrator", int, _defaults.record_every
        ),
        "noise_on": reader.value(
            _data, "noise_on", "integrator", bool, _defaults.noise_on
        ),
        "time_mode": reader.value(
            _data, "time_mode", "integrator", str, _defaults.time_mode
        ),
    }

    if _fields["time_mode"] not in IntegratorConfig.TIME_MODES:
        reader.malformed.append(
            f"integrator.time_mode: unknown mode {_fields['time_mode']!r}; expected "
            f"one of {IntegratorConfig.TIME_MODES}."
        )
        _fields["time_mode"] = _defaults.time_mode

    try:
        return IntegratorConfig(seed=int(seed or 0), **_fields)
    except InvalidIntegrator as e:
        reader.invalid.append(f"integrator.{e.field}: {e}")
        return _defaults


def _parse_ensemble(reader: _Reader, data: Any) -> EnsembleSection:
    _data = reader.section(data, "ensemble", ("chains", "workers"))

    if _data is None:
        return EnsembleSection()

    return EnsembleSection(
        chains=reader.value(
            _data,
            "chains",
            "ensemble",
            int,
            EnsembleSection.chains,
            check=lambda v: v >= 1,
            constraint=">= 1",
        ),
        workers=reader.value(
            _data,
            "workers",
            "ensemble",
            int,
            None,
            check=lambda v: v >= 1,
            constraint=">= 1",
        ),
    )


def _parse_landscape(reader: _Reader, data: Any) -> Optional[LandscapeSpec]:
    _data = reader.section(
        data,
        "landscape",
        ("family", "gamma", "angles", "moving", "kind", "pairs", "beta"),
    )

    if _data is None:
        return None

    _family = reader.value(_data, "family", "landscape", str, required=True)

    if _family is None:
        return None

    if _family not in LANDSCAPE_FAMILIES:
        reader.malformed.append(
            f"landscape.family: unknown family {_family!r}; expected one of "
            f"{LANDSCAPE_FAMILIES}."
        )
        return None

    _kind = _data.get("kind")
    if _kind is not None:
        reader.section(_kind, "landscape.kind", ("name", "sigma"))
        if isinstance(_kind, dict) and _kind.get("name") not in SIMILARITY_KINDS:
            reader.malformed.append(
                f"landscape.kind.name: unknown kind {_kind.get('name')!r}; expected "
                f"one of {SIMILARITY_KINDS}."
            )
            return None

    if reader.malformed:
        return None

    try:
        return landscape_from_dict(_data)
    except (AnnealabError, KeyError, TypeError, ValueError) as e:
        reader.invalid.append(f"landscape: {e}")
        return None


def _parse_schedule(reader: _Reader, data: Any) -> Optional[Schedule]:
    _data = reader.section(
        data,
        "schedule",
        ("type", "beta0", "c", "K", "exponent", "beta_start", "beta_end", "horizon"),
    )

    if _data is None:
        return None

    _type = reader.value(_data, "type", "schedule", str, required=True)
    if _type is None:
        return None

    if _type not in SCHEDULES:
        reader.malformed.append(
            f"schedule.type: unknown type {_type!r}; expected one of "
            f"{tuple(SCHEDULES)}."
        )
        return None

    for _key, _value in _data.items():
        if _key != "type" and not _matches(_value, float):
            reader.malformed.append(
                f"schedule.{_key}: expected a number; got {json.dumps(_value)}."
            )
            return None

    try:
        return schedule_from_dict(_data)
    except InvalidSchedule as e:
        reader.invalid.append(f"schedule.{e.field}: {e}")
        return None


def _parse_equilibrium(reader: _Reader, data: Any) -> Optional[EquilibriumSection]:
    _data = reader.section(data, "equilibrium", ("bins", "burn_in", "grid"))

    if _data is None:
        return None

    return EquilibriumSection(
        bins=reader.value(
            _data, "bins", "equilibrium", int, 64, check=lambda v: v >= 8,
            constraint=">= 8",
        ),
        burn_in=reader.value(
            _data, "burn_in", "equilibrium", float, 0.1,
            check=lambda v: 0 <= v < 1, constraint="in [0, 1)",
        ),
        grid=reader.value(
            _data, "grid", "equilibrium", int, 32768, check=lambda v: v >= 256,
            constraint=">= 256",
        ),
    )


def _parse_escape(reader: _Reader, data: Any) -> Optional[EscapeSection]:
    _data = reader.section(data, "escape", ("betas", "horizon", "start_basin"))

    if _data is None:
        return None

    _betas = reader.array(
        _data, "betas", "escape", float, required=True, check=_positive,
        constraint="> 0", min_length=1,
    )
    _horizon = reader.value(
        _data, "horizon", "escape", int, required=True, check=lambda v: v >= 1,
        constraint=">= 1",
    )
    _start = reader.value(
        _data, "start_basin", "escape", int, None, check=lambda v: v >= 0,
        constraint=">= 0",
    )

    if _betas is None or _horizon is None:
        return None

    return EscapeSection(
        betas=tuple(float(beta) for beta in _betas),
        horizon=int(_horizon),
        start_basin=_start,
    )


def _parse_anneal(reader: _Reader, data: Any) -> Optional[AnnealSection]:
    _data = reader.section(
        data, "anneal", ("rates", "rate_unit", "start", "success", "checkpoints")
    )

    if _data is None:
        return None

    _choices = {}
    for _key, _allowed in (
        ("rate_unit", AnnealSection.RATE_UNITS),
        ("start", AnnealSection.STARTS),
        ("success", AnnealSection.SUCCESS),
    ):
        _choice = reader.value(_data, _key, "anneal", str, _allowed[0])
        if _choice not in _allowed:
            reader.malformed.append(
                f"anneal.{_key}: unknown value {_choice!r}; expected one of {_allowed}."
            )
            _choice = _allowed[0]
        _choices[_key] = _choice

    return AnnealSection(
        rates=tuple(
            float(rate)
            for rate in reader.array(
                _data, "rates", "anneal", float, (), check=_positive, constraint="> 0"
            )
        ),
        checkpoints=tuple(
            sorted(
                int(step)
                for step in reader.array(
                    _data, "checkpoints", "anneal", int, (),
                    check=lambda v: v >= 0, constraint=">= 0",
                )
            )
        ),
        **_choices,
    )


def _parse_sharpening(reader: _Reader, data: Any) -> Optional[SharpeningSection]:
    _data = reader.section(
        data, "sharpening", ("betas", "kind", "points", "pairs", "pair")
    )

    if _data is None:
        return None

    _defaults = SharpeningSection()
    _betas = reader.array(
        _data, "betas", "sharpening", float, _defaults.betas, check=_positive,
        constraint="> 0", min_length=3,
    )
    _points = reader.array(_data, "points", "sharpening", list, _defaults.points)
    _pairs = reader.array(_data, "pairs", "sharpening", list, _defaults.pairs)
    _pair = reader.value(_data, "pair", "sharpening", list, None)

    _kind = _defaults.kind
    if "kind" in _data:
        _kind_data = reader.section(_data["kind"], "sharpening.kind", ("name", "sigma"))
        if _kind_data is not None:
            if _kind_data.get("name") not in SIMILARITY_KINDS:
                reader.malformed.append(
                    f"sharpening.kind.name: unknown kind {_kind_data.get('name')!r}; "
                    f"expected one of {SIMILARITY_KINDS}."
                )
            else:
                try:
                    _kind = similarity_from_dict(_kind_data)
                except (AnnealabError, TypeError, ValueError) as e:
                    reader.invalid.append(f"sharpening.kind: {e}")

    try:
        _points = tuple(tuple(float(x) for x in point) for point in _points)
        _pairs = tuple((int(i), int(j)) for i, j in _pairs)
        PairSet(len(_points), _pairs)
        if _pair is not None:
            _pair = (int(_pair[0]), int(_pair[1]))
            if _pair not in _pairs:
                reader.invalid.append(
                    f"sharpening.pair: {list(_pair)} is not one of the pairs."
                )
                _pair = None
    except (AnnealabError, IndexError, TypeError, ValueError) as e:
        reader.invalid.append(f"sharpening: {e}")
        return None

    return SharpeningSection(
        betas=tuple(float(beta) for beta in _betas),
        kind=_kind,
        points=_points,
        pairs=_pairs,
        pair=_pair,
    )


def _parse_gradcheck(reader: _Reader, data: Any) -> Optional[GradcheckSection]:
    _data = reader.section(
        data,
        "gradcheck",
        (
            "trials",
            "hessian_trials",
            "tolerance",
            "hessian_tolerance",
            "n_range",
            "d_range",
            "betas",
        ),
    )

    if _data is None:
        return None

    _defaults = GradcheckSection()

    def _range(key: str, low: int, default: Tuple[int, int]) -> Tuple[int, int]:
        _value = reader.array(
            _data, key, "gradcheck", int, default, check=lambda v: v >= low,
            constraint=f">= {low}",
        )
        if len(_value) != 2 or _value[0] > _value[1]:
            reader.invalid.append(
                f"gradcheck.{key}: must be [low, high] with low <= high; "
                f"got {list(_value)}."
            )
            return default
        return (int(_value[0]), int(_value[1]))

    return GradcheckSection(
        trials=reader.value(
            _data, "trials", "gradcheck", int, _defaults.trials,
            check=lambda v: v >= 1, constraint=">= 1",
        ),
        hessian_trials=reader.value(
            _data, "hessian_trials", "gradcheck", int, _defaults.hessian_trials,
            check=lambda v: v >= 1, constraint=">= 1",
        ),
        tolerance=reader.value(
            _data, "tolerance", "gradcheck", float, _defaults.tolerance,
            check=_positive, constraint="> 0",
        ),
        hessian_tolerance=reader.value(
            _data, "hessian_tolerance", "gradcheck", float,
            _defaults.hessian_tolerance, check=_positive, constraint="> 0",
        ),
        n_range=_range("n_range", 2, _defaults.n_range),
        d_range=_range("d_range", 2, _defaults.d_range),
        betas=tuple(
            float(beta)
            for beta in reader.array(
                _data, "betas", "gradcheck", float, _defaults.betas,
                check=_positive, constraint="> 0", min_length=1,
            )
        ),
    )
