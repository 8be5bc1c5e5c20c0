"""Deterministic stream derivation for seeded generators.

Every random quantity in the library is addressed, not consumed from a shared
stateful source: a (seed, index...) tuple always maps to the same stream, no
matter what was generated before it or on which thread.  Python-level code
uses numpy's counter-based Philox generator; the numba kernels use a
splitmix64 hash with the same keying discipline (see _kernels).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 mixing round on a 64-bit integer."""
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_key(seed: int, *indices: int) -> int:
    """Fold (seed, indices...) into a single 64-bit subkey."""
    key = splitmix64(seed & _MASK64)
    for ix in indices:
        key = splitmix64(key ^ ((ix & _MASK64) * _GOLDEN & _MASK64))
    return key


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Independent Philox generator addressed by (seed, indices...)."""
    key = np.array([seed & _MASK64, derive_key(seed, *indices)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
