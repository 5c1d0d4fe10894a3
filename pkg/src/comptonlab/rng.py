"""Counter-based random substreams.

Each walker owns an independent Philox-4x64 stream whose 128-bit key packs
``(seed, walker_index)``. A walker's numbers therefore never depend on how
walkers are distributed over threads, which is what makes results
bit-identical for a fixed seed.
"""

from __future__ import annotations

import numpy as np

RNG_NAME = "numpy.Philox4x64-10"
SEED_MASK = (1 << 64) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream_key(seed: int, index: int) -> int:
    return check_seed(seed) | (int(index) << 64)


def bit_generator(seed: int, index: int) -> np.random.Philox:
    return np.random.Philox(key=substream_key(seed, index))


def generator(seed: int, index: int) -> np.random.Generator:
    """numpy Generator on the ``(seed, index)`` substream."""
    return np.random.Generator(bit_generator(seed, index))


class RawWords:
    """Sequential reader of raw 64-bit words from one substream."""

    def __init__(self, seed: int, index: int):
        self._bg = bit_generator(seed, index)

    def take(self, n: int) -> np.ndarray:
        return self._bg.random_raw(int(n))


def chunked(n: int, workers: int, min_chunk: int = 256) -> list[range]:
    """Split ``range(n)`` into contiguous chunks, enough for ``workers`` threads."""
    workers = max(1, int(workers))
    size = max(min_chunk, -(-n // (4 * workers)))
    return [range(i, min(i + size, n)) for i in range(0, n, size)]
