# -*- coding: utf-8 -*-
import pytest

from annealab import config
from annealab.landscapes import SymmetricDoubleWell, TiltedDoubleWell

config.env.PYTEST_IS_RUNNING = 1


@pytest.fixture
def symmetric():
    return SymmetricDoubleWell()


@pytest.fixture
def tilted():
    return TiltedDoubleWell(gamma=0.2)
