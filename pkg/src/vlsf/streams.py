"""Counter-addressed random streams and block-parallel Monte Carlo.

Every stream is a Philox generator keyed by ``(seed, tag, *address)``.
Trials are grouped into fixed-size blocks; block ``b`` always draws from
the stream addressed by ``b``, so results do not depend on how blocks are
scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

BLOCK_SIZE = 4096

# stream tags keep unrelated consumers of one seed apart
TAG_CODEBOOK = 1
TAG_TAIL = 2
TAG_BOUND = 3
TAG_SIMULATE = 4
TAG_RENEWAL = 5
TAG_MARTINGALE = 6
TAG_MOMENTS = 7
TAG_SPHERE = 8

T = TypeVar("T")


def stream(seed: int, *address: int) -> np.random.Generator:
    if seed is None or int(seed) < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    entropy = [int(seed)] + [int(a) for a in address]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def block_sizes(trials: int, block_size: int = BLOCK_SIZE) -> list[int]:
    trials = int(trials)
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def run_blocks(
    fn: Callable[[np.random.Generator, int, int], T],
    trials: int,
    seed: int,
    tag: int,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> list[T]:
    """Call ``fn(rng, size, block_index)`` per block; results in block order."""
    sizes = block_sizes(trials, block_size)

    def one(b: int) -> T:
        return fn(stream(seed, tag, b), sizes[b], b)

    if workers <= 1 or len(sizes) == 1:
        return [one(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(sizes))))


def pooled_mean(sums: Sequence[float], counts: Sequence[int]) -> float:
    return math.fsum(sums) / sum(counts)
