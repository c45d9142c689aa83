# -*- coding: utf-8 -*-
"""
Checkpoint classes.

Context manager that keeps the completed points of a long sweep when it fails, and
hands them back on the next execution.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from types import TracebackType
from typing import Any, Callable, Dict, Iterable, List, Optional, Type, Union

from . import storage

logger = logging.getLogger(__name__)


class SweepCheckpoint:
    """
    Context manager that saves completed sweep points upon exceptions; loads them for
    the next execution.

    A sweep (over inverse temperatures, annealing rates, ...) records each finished
    point into :attr:`completed`. If anything inside the context raises,
    :class:`SweepCheckpoint` writes :attr:`completed` to every registered
    :class:`~annealab.classes.storage.StateStorage` before the exception propagates.
    Entering the same checkpoint again loads them back, so the sweep skips what it
    already has. Because every sweep point draws from its own derived seed, the
    resumed sweep produces the same results as an uninterrupted one.

    For example::

        from annealab.classes import LocalStorage, SweepCheckpoint

        with SweepCheckpoint("escape-3f2a").uses(LocalStorage.under(out)) as cp:
            for beta in betas:
                if beta not in cp:
                    cp.record(beta, estimate_exit_times(spec, beta, ...))

            estimates = [cp[beta] for beta in betas]

    Parameters
    ----------
    name : str
        Key of the checkpoint in its storages; include everything that identifies
        the sweep (experiment kind, config digest).

    uses : List[StateStorage] | None
        Storages, in decreasing order of priority.

    delete_cache : bool
        :attr:`~annealab.classes.storage.DELETE` wipes the checkpoint when the context
        exits successfully, :attr:`~annealab.classes.storage.RETAIN` keeps it.

    reset_if : bool | Callable[[], bool]
        If truthy on entry, saved checkpoints are ignored.
    """

    name: str

    completed: Dict[Any, Any]
    state_stores: List[storage.StateStorage]
    reset_condition: Union[bool, Callable[[], bool]]
    delete_cache: bool

    def __init__(
        self,
        name: str,
        *,
        uses: Optional[Iterable[storage.StateStorage]] = None,
        delete_cache: bool = storage.DELETE,
        reset_if: Union[bool, Callable[[], bool]] = False,
    ):
        self.name = name

        self.completed = {}
        self.state_stores = []

        if uses:
            self.uses(*uses)

        self.delete_cache = delete_cache
        self.reset_condition = reset_if

    def __enter__(self) -> "SweepCheckpoint":
        if not self.state_stores:
            raise ValueError(
                "No `StateStorage` registered; `SweepCheckpoint` has nowhere to store "
                "completed sweep points upon exception. Use `.uses()` to add "
                "`StateStorage` instances."
            )

        _should_reset = (
            self.reset_condition()
            if callable(self.reset_condition)
            else self.reset_condition
        )

        if not _should_reset:
            _loaded = self.load_state()

            if isinstance(_loaded, dict):
                self.completed.update(_loaded)
                logger.info(
                    "checkpoint_resumed name=%s completed=%d",
                    self.name,
                    len(_loaded),
                )

        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]] = None,
        exc_instance: Optional[BaseException] = None,
        exc_tb: Optional[TracebackType] = None,
    ) -> bool:
        if isinstance(exc_instance, BaseException) or not self.delete_cache:
            if self.completed:
                logger.info(
                    "checkpoint_saved name=%s completed=%d",
                    self.name,
                    len(self.completed),
                )
                self.save_state(self.completed)
        else:
            self.del_state()

        return False

    def __contains__(self, key: Any) -> bool:
        return key in self.completed

    def __getitem__(self, key: Any) -> Any:
        return self.completed[key]

    def record(self, key: Any, value: Any) -> Any:
        """
        Mark a sweep point as completed; returns ``value``.
        """
        self.completed[key] = value

        return value

    def uses(self, *storages: storage.StateStorage) -> "SweepCheckpoint":
        """
        Adds storages to this instance.

        They will all be written to upon error, but when loading, the first storage
        that returns a checkpoint is used and the rest disregarded.

        Returns
        -------
        SweepCheckpoint
            Returns itself so that these functions can be chained.

        Raises
        ------
        TypeError
            If any of ``storages`` is not a
            :class:`~annealab.classes.storage.StateStorage`.
        """
        for store in storages:
            if not isinstance(store, storage.StateStorage):
                raise TypeError(
                    f"All storages for {type(self).__name__} should be `StateStorage` "
                    f"instances; but {repr(store)} found."
                )

            if store not in self.state_stores:
                self.state_stores.append(store)

        return self

    def load_state(self) -> Optional[Dict[Any, Any]]:
        """
        **Internal function**. Use context manager (i.e. ``with`` statements) instead.
        """
        for store in self.state_stores:
            _loaded = store.load(self.name)

            if _loaded is not None:
                return _loaded

        return None

    def save_state(self, state: Dict[Any, Any]):
        """
        **Internal function**. Use context manager (i.e. ``with`` statements) instead.
        """
        with ThreadPoolExecutor() as executor:
            for _ in executor.map(
                lambda store: store.save(self.name, state), self.state_stores
            ):
                pass

    def del_state(self):
        """
        **Internal function**. Use context manager (i.e. ``with`` statements) instead.
        """
        with ThreadPoolExecutor() as executor:
            for _ in executor.map(
                lambda store: store.wipe(self.name), self.state_stores
            ):
                pass

    wipe = del_state
    """
    Alias for :meth:`del_state`.
    """

    def when_complete(self, delete_cache: bool = storage.DELETE) -> "SweepCheckpoint":
        """
        State what to do when the context exits successfully.

        Setting ``delete_cache`` to :attr:`~annealab.classes.storage.RETAIN` keeps the
        completed points around, so a later run with the same name skips the whole
        sweep.

        Returns
        -------
        SweepCheckpoint
            Returns itself so that these functions can be chained.
        """
        self.delete_cache = delete_cache

        return self

    def reset_if(self, condition: Union[bool, Callable[[], bool]]) -> "SweepCheckpoint":
        """
        Define a condition that if ``True`` then saved checkpoints are ignored.

        Parameters
        ----------
        condition : bool | Callable[[], bool]
            A literal, or a parameter-less function evaluated on entry.

        Returns
        -------
        SweepCheckpoint
            Returns itself so that these functions can be chained.

        Examples
        --------
        Recompute everything when ``ANNEALAB_RESET_CACHE`` is set::

            from annealab.config import env

            checkpoint = (
                SweepCheckpoint("anneal-sweep")
                .uses(LocalStorage.under(out))
                .reset_if(lambda: env.RESET_CACHE)
            )
        """
        self.reset_condition = condition

        return self
