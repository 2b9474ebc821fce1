"""Deterministic, worker-count-independent random sampling.

Work is cut into fixed-size blocks; block i draws from a Philox counter-based
stream keyed by (seed, i).  Per-block results are integers (hit counts or
histogram counts), and integer addition is associative and commutative, so
the merged result is bit-identical no matter how blocks land on workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

from .errors import DomainError

__all__ = ["BLOCK_SAMPLES", "block_stream", "sample_blocks", "resolve_workers"]

BLOCK_SAMPLES = 1 << 20

_MASK64 = (1 << 64) - 1
_MAX_AUTO_WORKERS = 8

T = TypeVar("T")


def resolve_workers(workers: int) -> int:
    """Map the public workers flag (0 = auto) to a concrete thread count."""
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 0:
        raise DomainError(f"workers must be an integer >= 0, got {workers!r}")
    if workers == 0:
        return min(os.cpu_count() or 1, _MAX_AUTO_WORKERS)
    return workers


def block_stream(seed: int, block_index: int) -> np.random.Generator:
    """Independent generator for one block: 128-bit Philox key (seed, index)."""
    key = ((seed & _MASK64) << 64) | (block_index & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_blocks(
    fn: Callable[[int, int], T],
    total: int,
    *,
    workers: int = 0,
    block_size: int = BLOCK_SAMPLES,
) -> list[T]:
    """Evaluate fn(block_index, block_count) over a partition of `total`.

    Results come back in block order; callers combine them with an
    associative, commutative reduction (integer sums), so the outcome does
    not depend on the worker count.
    """
    if total < 0:
        raise DomainError(f"total must be >= 0, got {total}")
    sizes = []
    remaining = total
    while remaining > 0:
        take = min(block_size, remaining)
        sizes.append(take)
        remaining -= take
    nworkers = resolve_workers(workers)
    if nworkers <= 1 or len(sizes) <= 1:
        return [fn(i, m) for i, m in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))
