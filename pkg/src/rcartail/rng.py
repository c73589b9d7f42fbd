"""Counter-based random sub-streams.

Every stream is addressed by a tuple of integers appended to a master seed
through :class:`numpy.random.SeedSequence` spawn keys, so the draws of one
stream never depend on how many other streams were consumed before it.
"""
from __future__ import annotations

import numpy as np

# first element of the spawn key
COEFFICIENTS = 0
COMMON_SHOCKS = 1
SERIES = 2
WEIGHTS = 3

MASK64 = (1 << 64) - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream ``key`` of master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit child seed, e.g. one panel seed per Monte Carlo replication."""
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
