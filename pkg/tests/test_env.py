# -*- coding: utf-8 -*-
import pytest

from annealab import config


def test_env():
    """
    Assert that the PYTEST flag is actually set.
    """
    assert config.env.PYTEST_IS_RUNNING


@pytest.mark.parametrize(
    ["value", "modifier", "expected"],
    [
        ("true", bool, True),
        ("FALSE", bool, False),
        ("0", bool, False),
        ("3", bool, True),
        ("12", int, 12),
        ("debug", str.upper, "DEBUG"),
    ],
)
def test_env_get(monkeypatch, value, modifier, expected):
    monkeypatch.setenv("ANNEALAB_TEST_VALUE", value)

    assert config.env.get("ANNEALAB_TEST_VALUE", modifier) == expected


def test_env_get_default(monkeypatch):
    monkeypatch.delenv("ANNEALAB_TEST_VALUE", raising=False)

    assert config.env.get("ANNEALAB_TEST_VALUE", int, default=7) == 7


def test_env_blocks_are_positive():
    assert config.env.CHAIN_BLOCK >= 1
    assert config.env.NOISE_BLOCK >= 1
    assert config.env.WORKERS >= 1
