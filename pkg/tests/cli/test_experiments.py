# -*- coding: utf-8 -*-
import csv
import math

import pytest

from annealab.cli import plots
from annealab.cli.experiments import (
    HEADERS,
    MANIFEST_NAME,
    STAGING_PREFIX,
    run_experiment,
)
from annealab.config.experiment import parse_config
from annealab.landscapes import (
    TiltedDoubleWell,
    deepest_suboptimal_basin,
    escape_prefactor,
)
from annealab.utils.io import sha256_file

EQUILIBRIUM = {
    "experiment": "equilibrium",
    "seed": 5,
    "landscape": {"family": "symmetric-double-well"},
    "schedule": {"type": "constant", "beta0": 1.0},
    "integrator": {"eta0": 0.01, "steps": 400},
    "ensemble": {"chains": 8},
    "equilibrium": {"bins": 16},
}

ESCAPE = {
    "experiment": "escape",
    "seed": 2,
    "landscape": {"family": "tilted-double-well", "gamma": 0.2},
    "integrator": {"eta0": 0.01},
    "ensemble": {"chains": 20},
    "escape": {"betas": [0.5, 1.0, 1.5], "horizon": 20000},
}

ANNEAL = {
    "experiment": "anneal-sweep",
    "seed": 8,
    "landscape": {"family": "tilted-double-well", "gamma": 0.2},
    "schedule": {"type": "logarithmic", "c": 0.5, "K": 2.0},
    "integrator": {"eta0": 0.01, "steps": 200},
    "ensemble": {"chains": 10},
    "anneal": {"rates": [0.5, 2.0], "checkpoints": [0, 100, 200]},
}


def run(data, out, **overrides):
    return run_experiment(parse_config(data).with_overrides(out=out, **overrides))


def read_table(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def test_equilibrium_outputs(tmp_path):
    _manifest = run(EQUILIBRIUM, tmp_path)
    _rows = read_table(tmp_path / "equilibrium.csv")

    assert tuple(_rows[0]) == HEADERS["equilibrium.csv"]
    assert len(_rows) == 17
    assert sum(float(row[3]) for row in _rows[1:]) == pytest.approx(1.0)
    assert 0.0 <= _manifest.summary["total_variation"] <= 1.0
    assert _manifest.summary["samples"] == 8 * 360


def test_equilibrium_reproducible(tmp_path):
    _first = run(EQUILIBRIUM, tmp_path / "a")
    _second = run(EQUILIBRIUM, tmp_path / "b")

    assert _first.files == _second.files
    assert _first.config_sha256 == _second.config_sha256

    _reseeded = run(EQUILIBRIUM, tmp_path / "c", seed=6)

    assert _reseeded.files["equilibrium.csv"] != _first.files["equilibrium.csv"]


def test_manifest_hashes(tmp_path):
    _manifest = run(EQUILIBRIUM, tmp_path)

    assert (tmp_path / MANIFEST_NAME).is_file()
    assert set(_manifest.files) == {"equilibrium.csv", "equilibrium.svg"}

    for _name, _digest in _manifest.files.items():
        assert sha256_file(tmp_path / _name) == _digest


def test_failed_run_leaves_previous_outputs(tmp_path, monkeypatch):
    _first = run(EQUILIBRIUM, tmp_path)
    _manifest_text = (tmp_path / MANIFEST_NAME).read_text(encoding="utf-8")

    def _broken_plot(*args, **kwargs):
        raise RuntimeError("renderer unavailable")

    monkeypatch.setattr(plots, "plot_equilibrium", _broken_plot)

    with pytest.raises(RuntimeError):
        run(EQUILIBRIUM, tmp_path, seed=6)

    assert (tmp_path / MANIFEST_NAME).read_text(encoding="utf-8") == _manifest_text
    for _name, _digest in _first.files.items():
        assert sha256_file(tmp_path / _name) == _digest

    assert not list(tmp_path.glob(f"{STAGING_PREFIX}*"))


def test_failed_run_writes_no_tables(tmp_path, monkeypatch):
    def _broken_plot(*args, **kwargs):
        raise RuntimeError("renderer unavailable")

    monkeypatch.setattr(plots, "plot_equilibrium", _broken_plot)

    with pytest.raises(RuntimeError):
        run(EQUILIBRIUM, tmp_path)

    assert not (tmp_path / "equilibrium.csv").exists()
    assert not (tmp_path / MANIFEST_NAME).exists()
    assert not list(tmp_path.glob(f"{STAGING_PREFIX}*"))


def test_escape_outputs(tmp_path):
    _manifest = run(ESCAPE, tmp_path)
    _escape = read_table(tmp_path / "escape.csv")
    _arrhenius = read_table(tmp_path / "arrhenius.csv")

    assert tuple(_escape[0]) == HEADERS["escape.csv"]
    assert len(_escape) == 1 + 3 * 20
    assert tuple(_arrhenius[0]) == HEADERS["arrhenius.csv"]
    assert [float(row[0]) for row in _arrhenius[1:]] == [0.5, 1.0, 1.5]

    _spec = TiltedDoubleWell(gamma=0.2)
    _basin = deepest_suboptimal_basin(_spec)

    assert _manifest.summary["start_basin"] == str(_basin)
    assert _manifest.summary["slope"] > 0
    assert _manifest.summary["predicted_intercept"] == pytest.approx(
        -math.log(escape_prefactor(_spec, _basin))
    )


def test_escape_independent_of_workers(tmp_path):
    _serial = run(ESCAPE, tmp_path / "serial")
    _threaded = run(
        {**ESCAPE, "ensemble": {"chains": 20, "workers": 3}}, tmp_path / "threaded"
    )

    assert _serial.files["escape.csv"] == _threaded.files["escape.csv"]


def test_escape_clears_checkpoint(tmp_path):
    run(ESCAPE, tmp_path)

    assert not list(tmp_path.rglob("*.pickle"))


def test_anneal_outputs(tmp_path):
    _manifest = run(ANNEAL, tmp_path)
    _anneal = read_table(tmp_path / "anneal.csv")
    _checkpoints = read_table(tmp_path / "anneal_checkpoints.csv")

    assert tuple(_anneal[0]) == HEADERS["anneal.csv"]
    assert len(_anneal) == 1 + 2 * 10
    assert tuple(_checkpoints[0]) == HEADERS["anneal_checkpoints.csv"]
    assert len(_checkpoints) == 1 + 2 * 3

    # Every chain starts in the shallow basin.
    assert [float(row[2]) for row in _checkpoints[1:] if row[1] == "0"] == [1.0, 1.0]

    _c_star = TiltedDoubleWell(gamma=0.2).barriers.c_star
    _rates = _manifest.summary["rates"]

    assert _manifest.summary["c_star"] == pytest.approx(_c_star)
    assert [entry["c"] for entry in _rates] == pytest.approx(
        [0.5 * _c_star, 2 * _c_star]
    )
    assert [entry["class"] for entry in _rates] == ["subcritical", "supercritical"]


def test_sharpening_outputs(tmp_path):
    _manifest = run({"experiment": "sharpening"}, tmp_path)
    _rows = read_table(tmp_path / "sharpening.csv")

    assert tuple(_rows[0]) == HEADERS["sharpening.csv"]
    assert [float(row[0]) for row in _rows[1:]] == [10.0, 18.0, 32.0, 56.0, 100.0]
    assert 0.8 <= _manifest.summary["slope"] <= 1.2


def test_gradcheck_outputs(tmp_path):
    _data = {
        "experiment": "gradcheck",
        "gradcheck": {"trials": 10, "hessian_trials": 4},
    }
    _manifest = run(_data, tmp_path)

    assert len(read_table(tmp_path / "gradcheck.csv")) == 11
    assert len(read_table(tmp_path / "hessian_check.csv")) == 5
    assert _manifest.summary["gradient_passed"]
    assert _manifest.summary["hessian_passed"]
    assert run(_data, tmp_path / "again").files == _manifest.files
