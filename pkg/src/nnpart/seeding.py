"""Deterministic RNG derivation.

Every stochastic routine in the package draws from a generator derived
here, so identical (seed, state) inputs replay bit-for-bit.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 63) - 1


def derive_seedseq(*keys: int) -> np.random.SeedSequence:
    """Stable SeedSequence from a tuple of integer keys (negatives allowed)."""
    entropy = [int(k) & _MASK for k in keys]
    return np.random.SeedSequence(entropy)


def derive_rng(*keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seedseq(*keys))


def as_rng(seed) -> np.random.Generator:
    """Generator from an int, SeedSequence, or Generator (passed through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return derive_rng(int(seed))


def split_seed(seed, n: int) -> list[int]:
    """n independent integer sub-seeds; pure function of the input seed."""
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = derive_seedseq(int(seed))
    return [int(s) for s in ss.generate_state(n, dtype=np.uint64)]
