"""Seeded substreams on top of the Philox-4x64 counter-based generator.

Every stream is keyed by ``(seed, *key)`` through :class:`numpy.random.SeedSequence`,
so a given block of work draws the same numbers no matter which worker runs it.
"""

import numpy as np

SEED_MAX = 2**64 - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return seed


def substream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
