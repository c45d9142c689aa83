# -*- coding: utf-8 -*-
import json
from pathlib import Path

import pytest

from annealab.config.experiment import (
    AnnealSection,
    SharpeningSection,
    load_config,
    parse_config,
)
from annealab.exceptions import ParseError, ValidationError
from annealab.landscapes import SymmetricDoubleWell, TiltedDoubleWell
from annealab.potential import Gaussian
from annealab.schedules import Constant, Logarithmic

EQUILIBRIUM = {
    "experiment": "equilibrium",
    "landscape": {"family": "symmetric-double-well"},
    "schedule": {"type": "constant", "beta0": 2.0},
}


def with_changes(base, **changes):
    _data = json.loads(json.dumps(base))
    _data.update(changes)
    return _data


def failures_of(data, error=ParseError):
    with pytest.raises(error) as e:
        parse_config(data)

    return e.value.failures


def test_minimal_defaults():
    _cfg = parse_config(EQUILIBRIUM)

    assert _cfg.kind == "equilibrium"
    assert _cfg.seed == 0
    assert _cfg.out == Path("results")
    assert isinstance(_cfg.landscape, SymmetricDoubleWell)
    assert _cfg.schedule == Constant(2.0)
    assert _cfg.integrator.eta0 == 1e-3
    assert _cfg.integrator.steps == 10_000
    assert _cfg.ensemble.chains == 100
    assert _cfg.epsilon == 0.1
    assert _cfg.equilibrium.bins == 64
    assert _cfg.anneal == AnnealSection()
    assert _cfg.escape is None


def test_load_config(tmp_path):
    _path = tmp_path / "equilibrium.json"
    _path.write_text(json.dumps(with_changes(EQUILIBRIUM, seed=17)), encoding="utf-8")

    _cfg = load_config(_path)

    assert _cfg.seed == 17
    assert _cfg.integrator.seed == 17


def test_load_config_bad_json(tmp_path):
    _path = tmp_path / "broken.json"
    _path.write_text('{"experiment": ', encoding="utf-8")

    with pytest.raises(ParseError, match="invalid JSON at line 1"):
        load_config(_path)

    with pytest.raises(ParseError, match="cannot be read"):
        load_config(tmp_path / "missing.json")


@pytest.mark.parametrize(
    ["changes", "expected"],
    [
        ({"bogus": 1}, "bogus: unknown key"),
        ({"experiment": "melt"}, "experiment: unknown kind"),
        ({"seed": True}, "seed: expected an integer"),
        ({"seed": "3"}, "seed: expected an integer"),
        ({"integrator": {"eta": 0.1}}, "integrator.eta: unknown key"),
        ({"integrator": {"time_mode": "wall"}}, "integrator.time_mode: unknown mode"),
        ({"landscape": {"family": "triple-well"}}, "landscape.family: unknown family"),
        ({"schedule": {"type": "geometric"}}, "schedule.type: unknown type"),
        ({"schedule": {"type": "constant", "beta0": "2"}}, "schedule.beta0"),
        ({"anneal": {"start": "hot"}}, "anneal.start: unknown value"),
    ],
)
def test_malformed(changes, expected):
    _failures = failures_of(with_changes(EQUILIBRIUM, **changes))

    assert any(failure.startswith(expected) for failure in _failures), _failures


def test_missing_sections():
    _failures = failures_of({"experiment": "escape"})

    assert "landscape: required by the escape experiment." in _failures
    assert "escape: required by the escape experiment." in _failures


def test_all_invariant_failures_reported():
    _failures = failures_of(
        with_changes(
            EQUILIBRIUM,
            schedule={"type": "constant", "beta0": -1.0},
            ensemble={"chains": 0},
            integrator={"eta0": 0.0},
        ),
        ValidationError,
    )

    assert len(_failures) == 3
    assert sorted(failure.split(":")[0] for failure in _failures) == [
        "ensemble.chains",
        "integrator.eta0",
        "schedule.beta0",
    ]


def test_malformed_takes_precedence():
    _failures = failures_of(
        with_changes(EQUILIBRIUM, bogus=1, ensemble={"chains": 0}), ParseError
    )

    assert len(_failures) == 2


@pytest.mark.parametrize(
    ["changes", "expected"],
    [
        ({"schedule": {"type": "logarithmic", "c": 1.0, "K": 2.0}}, "schedule.type"),
        ({"landscape": {"family": "tilted-double-well", "gamma": 0.7}}, "landscape"),
        ({"seed": -1}, "seed"),
        ({"epsilon": 0}, "epsilon"),
        ({"equilibrium": {"bins": 4}}, "equilibrium.bins"),
        ({"equilibrium": {"burn_in": 1.0}}, "equilibrium.burn_in"),
        ({"integrator": {"eta_decay": 0.3}}, "integrator.eta_decay"),
    ],
)
def test_invalid(changes, expected):
    _failures = failures_of(with_changes(EQUILIBRIUM, **changes), ValidationError)

    assert [failure.split(":")[0] for failure in _failures] == [expected]


def test_escape_section():
    _cfg = parse_config(
        {
            "experiment": "escape",
            "landscape": {"family": "tilted-double-well", "gamma": 0.2},
            "escape": {"betas": [2, 3, 4], "horizon": 1000},
        }
    )

    assert isinstance(_cfg.landscape, TiltedDoubleWell)
    assert _cfg.escape.betas == (2.0, 3.0, 4.0)
    assert _cfg.escape.start_basin is None

    _failures = failures_of(
        {
            "experiment": "escape",
            "landscape": {"family": "symmetric-double-well"},
            "escape": {"betas": [], "horizon": 0},
        },
        ValidationError,
    )

    assert len(_failures) == 2


def test_anneal_section():
    _cfg = parse_config(
        {
            "experiment": "anneal-sweep",
            "landscape": {"family": "tilted-double-well", "gamma": 0.2},
            "schedule": {"type": "logarithmic", "c": 0.5, "K": 2.0},
            "anneal": {"rates": [0.5, 2], "checkpoints": [1000, 10, 100]},
        }
    )

    assert _cfg.schedule == Logarithmic(c=0.5, K=2.0)
    assert _cfg.anneal.rates == (0.5, 2.0)
    assert _cfg.anneal.checkpoints == (10, 100, 1000)
    assert _cfg.anneal.rate_unit == "critical"
    assert _cfg.anneal.start == "shallow"
    assert _cfg.anneal.success == "basin"


def test_sharpening_section():
    _cfg = parse_config({"experiment": "sharpening"})

    assert _cfg.sharpening == SharpeningSection()
    assert _cfg.sharpening.kind == Gaussian(1.0)

    _failures = failures_of(
        {"experiment": "sharpening", "sharpening": {"pair": [0, 1]}}, ValidationError
    )

    assert _failures[0].startswith("sharpening.pair")


def test_gradcheck_section():
    _cfg = parse_config(
        {"experiment": "gradcheck", "gradcheck": {"trials": 5, "n_range": [3, 4]}}
    )

    assert _cfg.gradcheck.trials == 5
    assert _cfg.gradcheck.n_range == (3, 4)
    assert _cfg.gradcheck.d_range == (2, 4)

    _failures = failures_of(
        {"experiment": "gradcheck", "gradcheck": {"n_range": [5, 3]}}, ValidationError
    )

    assert _failures[0].startswith("gradcheck.n_range")


def test_digest_and_overrides():
    _cfg = parse_config(EQUILIBRIUM)

    assert _cfg.digest == parse_config(EQUILIBRIUM).digest
    assert len(_cfg.digest) == 64

    _reseeded = _cfg.with_overrides(seed=5, out="elsewhere")

    assert _reseeded.seed == 5
    assert _reseeded.integrator.seed == 5
    assert _reseeded.out == Path("elsewhere")
    assert _reseeded.digest != _cfg.digest

    with pytest.raises(ValidationError):
        _cfg.with_overrides(seed=2**64)
