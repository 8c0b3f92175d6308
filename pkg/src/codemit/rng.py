"""Counter-based per-shot random streams.

Shot ``i`` of a run seeded with ``base_seed`` draws from a Philox generator
keyed by ``mix64(base_seed, i)``.  The stream of a shot never depends on how
shots are partitioned across workers.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(base_seed: int, index: int) -> int:
    return splitmix64(splitmix64(base_seed & MASK64) ^ (index & MASK64))


def shot_stream(base_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=mix64(base_seed, index)))
