# -*- coding: utf-8 -*-
"""
Classes declared by this package.

These fall under two categories:

- :mod:`checkpoint` - Consists only :class:`SweepCheckpoint`, the context manager
  that keeps the completed points of a failed sweep.
- :mod:`storage` - :class:`StateStorage` subclasses that performs the actual caching.
"""
from . import checkpoint, storage
from .checkpoint import SweepCheckpoint
from .storage import LocalStorage, StateStorage
