"""Counter-based randomness keyed by ``(seed, trial_id, index)``.

Every random decision in the package (edge retention, sampled set choice)
is a pure function of its key, so results never depend on iteration order
or on how trials are spread over workers.

Algorithm (all arithmetic mod 2**64)::

    GOLDEN = 0x9E3779B97F4A7C15
    mix(z):                         # SplitMix64 finalizer
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)
    stream(seed, trial) = mix(mix(seed ^ GOLDEN) + trial)
    word(seed, trial, i) = mix(stream(seed, trial) + (i + 1) * GOLDEN)
    uniform(seed, trial, i) = (word >> 11) * 2**-53        # in [0, 1)

Seeds and trial ids are reduced mod 2**64 first, so negative values are
accepted and mean their two's-complement bit pattern.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, trial_id: int) -> int:
    return mix64(mix64((seed & MASK64) ^ GOLDEN) + (trial_id & MASK64))


def word(seed: int, trial_id: int, index: int) -> int:
    return mix64(stream_key(seed, trial_id) + (index + 1) * GOLDEN)


def uniform(seed: int, trial_id: int, index: int) -> float:
    return (word(seed, trial_id, index) >> 11) * 2.0**-53


def uniforms(seed: int, trial_id: int, count: int) -> np.ndarray:
    """Vectorised ``uniform(seed, trial_id, i)`` for ``i = 0..count-1``."""
    key = np.uint64(stream_key(seed, trial_id))
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = key + i * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


class KeyedRandom:
    """Small helper handing out consecutive uniforms from one stream.

    Used where an algorithm needs a sequence of random choices (sampled
    expander checks, heuristic separator sweeps) rather than one draw per
    edge.
    """

    def __init__(self, seed: int, trial_id: int = 0):
        self._key = stream_key(seed, trial_id)
        self._i = 0

    def random(self) -> float:
        self._i += 1
        return (mix64(self._key + self._i * GOLDEN) >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        return min(int(self.random() * n), n - 1)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, population: list, k: int) -> list:
        pool = list(population)
        out = []
        for _ in range(k):
            j = self.randrange(len(pool))
            pool[j], pool[-1] = pool[-1], pool[j]
            out.append(pool.pop())
        return out
