# -*- coding: utf-8 -*-
import json
from pathlib import Path
from typing import Any, Callable, Dict

import pytest


@pytest.fixture
def write_config(tmp_path) -> Callable[..., Path]:
    """
    Write a configuration document into the test's temporary directory.
    """

    def _write(data: Dict[str, Any], name: str = "config.json") -> Path:
        _path = tmp_path / name
        _path.write_text(json.dumps(data), encoding="utf-8")
        return _path

    return _write
