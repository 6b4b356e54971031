"""Thread pool helper capped by NMCODE_THREADS."""

import zlib
from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from . import config

T = TypeVar('T')
R = TypeVar('R')


def worker_count(limit: Optional[int] = None) -> int:
    cap = config['THREADS']
    return max(1, min(cap, limit) if limit else cap)


def parallel_map(fn: Callable[[T], R], items: Sequence[T],
                 threads: Optional[int] = None) -> list:
    """
    Map fn over items, preserving input order in the result.

    Workers only ever see immutable inputs, so results do not depend on
    scheduling.
    """
    items = list(items)
    count = worker_count(threads)
    if count == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(count, len(items))) as pool:
        return list(pool.map(fn, items))


def parallel_reduce(fn: Callable[[T], R], items: Iterable[T],
                    combine: Callable[[R, R], R], initial: R,
                    threads: Optional[int] = None) -> R:
    """Map then fold with an associative, order-independent combine."""
    return reduce(combine, parallel_map(fn, list(items), threads), initial)


def chunk_ranges(total: int, chunk: int):
    """(start, stop) pairs covering range(total)."""
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]


def derive_seed(seed: int, *path) -> int:
    """
    Child seed for a node of the seed tree (command -> module -> trial index).

    String path elements are hashed with crc32 so the result is stable
    across processes.
    """
    words = [int(seed) & 0xFFFFFFFF]
    for part in path:
        words.append(zlib.crc32(part.encode()) if isinstance(part, str) else int(part) & 0xFFFFFFFF)
    return int(np.random.SeedSequence(words).generate_state(1)[0])
