# -*- coding: utf-8 -*-
import json

import pytest

from annealab.cli.main import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main

GRADCHECK = {
    "experiment": "gradcheck",
    "seed": 3,
    "gradcheck": {"trials": 3, "hessian_trials": 2, "n_range": [3, 4]},
}


def run(kind, config, *extra) -> int:
    return main([kind, "--config", str(config), "--quiet", *map(str, extra)])


def test_main_success(tmp_path, write_config):
    _out = tmp_path / "out"

    assert run("gradcheck", write_config(GRADCHECK), "--out", _out) == EXIT_OK

    _manifest = json.loads((_out / "manifest.json").read_text(encoding="utf-8"))

    assert _manifest["experiment"] == "gradcheck"
    assert _manifest["seed"] == 3
    assert set(_manifest["files"]) == {
        "gradcheck.csv",
        "hessian_check.csv",
        "gradcheck.svg",
    }


def test_main_seed_override(tmp_path, write_config):
    _out = tmp_path / "out"

    assert (
        run("gradcheck", write_config(GRADCHECK), "--out", _out, "--seed", 11)
        == EXIT_OK
    )
    assert json.loads((_out / "manifest.json").read_text())["seed"] == 11


@pytest.mark.parametrize(
    "data",
    [
        {"experiment": "gradcheck", "bogus": 1},
        {"experiment": "gradcheck", "gradcheck": {"trials": 0}},
        {"experiment": "sharpening"},
    ],
)
def test_main_invalid_config(tmp_path, write_config, capsys, data):
    _out = tmp_path / "out"

    assert run("gradcheck", write_config(data), "--out", _out) == EXIT_INVALID
    assert "configuration" in capsys.readouterr().err
    assert not (_out / "manifest.json").exists()


def test_main_missing_config(tmp_path):
    assert run("gradcheck", tmp_path / "nowhere.json") == EXIT_INVALID


def test_main_bad_seed(write_config):
    assert run("gradcheck", write_config(GRADCHECK), "--seed", -4) == EXIT_INVALID


def test_main_runtime_failure(tmp_path, write_config):
    _config = write_config(
        {
            "experiment": "anneal-sweep",
            "landscape": {"family": "symmetric-double-well"},
            "schedule": {"type": "logarithmic", "c": 0.5, "K": 2.0},
            "integrator": {"eta0": 0.01, "steps": 10},
        }
    )
    _out = tmp_path / "out"

    assert run("anneal-sweep", _config, "--out", _out) == EXIT_FAILED
    assert not (_out / "manifest.json").exists()


def test_main_unknown_experiment(write_config):
    with pytest.raises(SystemExit) as e:
        main(["melt", "--config", str(write_config(GRADCHECK))])

    assert e.value.code == 2
