# -*- coding: utf-8 -*-
"""
Seed derivation.

Every random stream in this package is a child of one master seed, keyed by integer
indices, so that any chain or sweep point can be reproduced on its own.
"""
from typing import Tuple

import numpy as np

MAX_SEED: int = 2**64 - 1


def chain_streams(
    master_seed: int, chain: int
) -> Tuple[np.random.Generator, np.random.Generator]:
    """
    Return the ``(initial condition, noise)`` generators of one chain.

    Parameters
    ----------
    master_seed : int
        Master seed of the ensemble, in ``[0, 2**64)``.

    chain : int
        Index of the chain, ``>= 0``.

    Returns
    -------
    Tuple[numpy.random.Generator, numpy.random.Generator]
        Two independent streams; the first draws the initial state, the second the
        Langevin noise.
    """
    _init, _noise = np.random.SeedSequence(master_seed, spawn_key=(chain,)).spawn(2)

    return np.random.default_rng(_init), np.random.default_rng(_noise)


def derive_seed(master_seed: int, *keys: int) -> int:
    """
    Derive a child master seed, e.g. one per sweep point.
    """
    _state = np.random.SeedSequence(master_seed, spawn_key=keys).generate_state(
        1, dtype=np.uint64
    )

    return int(_state[0])
