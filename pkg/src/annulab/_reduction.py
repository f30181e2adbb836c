"""Deterministic reductions and a fixed-chunking worker pool.

Every summation that feeds a reported number goes through one of the helpers
here.  The contract: the result depends only on the multiset of inputs and the
fixed chunk boundaries, never on the number of workers or the completion order
of parallel tasks.  Integer reductions are exact; float reductions use
``math.fsum`` (exactly rounded) over fixed-size chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

#: Number of float64 values folded into one np.sum call before fsum takes over.
#: np.sum on a contiguous 1-D block is pairwise and single-threaded, hence
#: bit-reproducible for a given block content.
CHUNK = 1 << 20


def fsum(values: Iterable[float]) -> float:
    """Exactly rounded float sum (order independent)."""
    return math.fsum(values)


def chunked_sum(values: np.ndarray) -> float:
    """Deterministic sum of a float array: pairwise np.sum per fixed chunk,
    exactly rounded fsum across chunk results."""
    flat = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if flat.size <= CHUNK:
        return float(np.sum(flat))
    parts = [float(np.sum(flat[i : i + CHUNK])) for i in range(0, flat.size, CHUNK)]
    return math.fsum(parts)


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map preserving input order.  Chunking/work-splitting is the caller's
    responsibility and must not depend on ``workers``; this helper only decides
    whether the fixed jobs run serially or on a thread pool."""
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
