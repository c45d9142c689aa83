# -*- coding: utf-8 -*-
"""
Storage classes.

These classes perform the actual read/write of pickled sweep checkpoints to their
respective storage types.
"""
import abc
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Union

import dill as pickle

from ..utils.io import atomic_write_bytes

logger = logging.getLogger(__name__)

DELETE: bool = True
RETAIN: bool = False

CACHE_DIRNAME: str = ".annealab-cache"
"""
Directory, under an experiment's output directory, holding its checkpoints.
"""


class StateStorage(abc.ABC):
    """
    Abstract base class for a checkpoint storage unit.
    """

    @abc.abstractmethod
    def load_data(self, name: str) -> Optional[bytes]:
        """
        Load the pickled bytes.
        """

    @abc.abstractmethod
    def save_data(self, name: str, data: bytes):
        """
        Save the pickled bytes.
        """

    @abc.abstractmethod
    def wipe(self, name: str):
        """
        Remove any saved checkpoint.
        """

    def load(self, name: str) -> Optional[Dict[Any, Any]]:
        """
        Load a checkpoint from storage.

        Parameters
        ----------
        name : str
            Name of the calling :class:`~annealab.classes.checkpoint.SweepCheckpoint`.

        Returns
        -------
        Dict[Any, Any]
            If found; otherwise

        None
            If not found, or the stored bytes could not be unpickled.
        """
        _data = self.load_data(name)

        if _data:
            try:
                return pickle.loads(_data)
            except (pickle.UnpicklingError, EOFError, AttributeError) as e:
                logger.warning("checkpoint_unreadable name=%s error=%s", name, e)

        return None

    def save(self, name: str, state: Dict[Any, Any]):
        """
        Save a checkpoint to storage.

        Parameters
        ----------
        name : str
            Name of the calling :class:`~annealab.classes.checkpoint.SweepCheckpoint`.

        state : Dict[Any, Any]
            Completed sweep points.
        """
        self.save_data(name, pickle.dumps(state))


class LocalStorage(StateStorage):
    """
    Load and save checkpoints on the local disk.

    Parameters
    ----------
    path : str | pathlib.Path
        Directory holding the ``<name>.pickle`` files. Defaults to the current
        working directory.

    create : bool
        Create ``path`` (and its parents) if it does not exist yet.
    """

    path: Path

    def __init__(self, path: Union[Path, str] = Path(), *, create: bool = False):
        self.path = Path(path)

        if create:
            self.path.mkdir(parents=True, exist_ok=True)

    @classmethod
    def under(cls, out_dir: Union[Path, str]) -> "LocalStorage":
        """
        The checkpoint cache of an experiment writing to ``out_dir``.
        """
        return cls(Path(out_dir) / CACHE_DIRNAME, create=True)

    def _resolve_path(self, name: str) -> Path:
        if self.path.is_file():
            raise OSError(
                f"`path` must be a directory; {str(self.path.resolve())} found."
            )
        elif not self.path.exists():
            raise OSError(f"`path` {str(self.path.resolve())} does not exist.")

        return (self.path / f"{re.sub(r'[^A-Za-z0-9._-]', '_', name)}.pickle").resolve()

    def load_data(self, name: str) -> Optional[bytes]:
        path = self._resolve_path(name)

        if path.is_file():
            return path.read_bytes()

        return None

    def save_data(self, name: str, data: bytes):
        atomic_write_bytes(self._resolve_path(name), data)

    def wipe(self, name: str):
        path = self._resolve_path(name)

        if path.is_file():
            path.unlink()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LocalStorage) and self.path == other.path

    def __hash__(self) -> int:
        return hash(self.path)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self.path)!r})"
