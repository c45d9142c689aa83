# -*- coding: utf-8 -*-
"""
File output helpers.

All result files are written atomically: the content is rendered in memory, written
to a temporary file in the destination directory, then renamed over the target.
"""
import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

import numpy as np

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """
    Write ``data`` to ``path`` through a temporary sibling file.

    Parameters
    ----------
    path : str | pathlib.Path
        Destination; its parent directory must exist.

    data : bytes
        Full content of the file.

    Returns
    -------
    pathlib.Path
        The destination path.
    """
    path = Path(path)

    _fd, _tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(_fd, "wb") as _file:
            _file.write(data)
        os.replace(_tmp, path)
    except BaseException:
        if os.path.exists(_tmp):
            os.unlink(_tmp)
        raise

    return path


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    UTF-8 variant of :func:`atomic_write_bytes`.
    """
    return atomic_write_bytes(path, text.encode("utf-8"))


def format_cell(value: Any) -> str:
    """
    Render one CSV cell.

    Floats use the shortest round-trip representation, booleans are lowercase words
    and non-finite values are ``nan``/``inf``/``-inf``.
    """
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"

    if isinstance(value, (int, np.integer)):
        return str(int(value))

    if isinstance(value, (float, np.floating)):
        value = float(value)

        if math.isnan(value):
            return "nan"

        if math.isinf(value):
            return "inf" if value > 0 else "-inf"

        return repr(value)

    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Render a header row and data rows as comma separated text with LF line endings.
    """
    _buffer = io.StringIO()
    _writer = csv.writer(_buffer, lineterminator="\n")

    _writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(
                f"CSV row has {len(row)} cells but the header has {len(header)}: "
                f"{row!r}"
            )
        _writer.writerow([format_cell(value) for value in row])

    return _buffer.getvalue()


def write_csv(
    path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """
    Render and atomically write a CSV file.
    """
    return atomic_write_text(path, render_csv(header, rows))


def write_json(path: PathLike, payload: Any) -> Path:
    """
    Atomically write ``payload`` as indented, key-sorted JSON.
    """
    return atomic_write_text(
        path, json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n"
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)

    if isinstance(value, np.floating):
        return float(value)

    if isinstance(value, np.ndarray):
        return value.tolist()

    if isinstance(value, Path):
        return str(value)

    raise TypeError(f"Object of type {type(value).__name__} is not JSON serialisable.")


def sha256_file(path: PathLike) -> str:
    """
    Lowercase hex SHA-256 digest of a file.
    """
    _hash = hashlib.sha256()

    with open(path, "rb") as _file:
        for _chunk in iter(lambda: _file.read(1 << 16), b""):
            _hash.update(_chunk)

    return _hash.hexdigest()


def sha256_text(text: str) -> str:
    """
    Lowercase hex SHA-256 digest of a string.
    """
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
