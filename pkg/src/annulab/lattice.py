"""Iteration over nonzero integer frequencies, one representative per +-pair.

The half lattice P covers Z^d \\ {0} exactly once up to sign:

* d = 2:  {(0, b) : b >= 1}  union  {(a, b) : a >= 1}
* d = 3:  {(0, 0, c) : c >= 1}  union  {(0, b, c) : b >= 1}
          union  {(a, b, c) : a >= 1}

Blocks are produced in a fixed order (increasing leading coordinate, rows in
lexicographic order) and bounded in size, so evaluation engines can map them
to workers and still reduce deterministically.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

__all__ = ["half_lattice_blocks", "half_lattice_count"]

MAX_BLOCK = 1 << 19


def _rows_2d(N: int) -> Iterator[np.ndarray]:
    b = np.arange(1, N + 1, dtype=np.int64)
    yield np.stack([np.zeros_like(b), b], axis=-1)
    for a in range(1, N + 1):
        bmax = math.isqrt(N * N - a * a)
        b = np.arange(-bmax, bmax + 1, dtype=np.int64)
        yield np.stack([np.full_like(b, a), b], axis=-1)


def _rows_3d(N: int) -> Iterator[np.ndarray]:
    c = np.arange(1, N + 1, dtype=np.int64)
    zero = np.zeros_like(c)
    yield np.stack([zero, zero, c], axis=-1)
    for b in range(1, N + 1):
        cmax = math.isqrt(N * N - b * b)
        c = np.arange(-cmax, cmax + 1, dtype=np.int64)
        yield np.stack([np.zeros_like(c), np.full_like(c, b), c], axis=-1)
    for a in range(1, N + 1):
        r2 = N * N - a * a
        bmax = math.isqrt(r2)
        for b in range(-bmax, bmax + 1):
            cmax = math.isqrt(r2 - b * b)
            c = np.arange(-cmax, cmax + 1, dtype=np.int64)
            yield np.stack([np.full_like(c, a), np.full_like(c, b), c], axis=-1)


def half_lattice_blocks(d: int, N: int, max_block: int = MAX_BLOCK) -> Iterator[np.ndarray]:
    """Yield (m, d) int64 arrays of frequencies with 0 < |n| <= N, one
    representative per {n, -n} pair, in a fixed deterministic order."""
    if N < 1:
        raise ValueError("cutoff must be >= 1")
    if d == 2:
        rows = _rows_2d(N)
    elif d == 3:
        rows = _rows_3d(N)
    else:
        raise ValueError("frequency iteration supports d = 2 and d = 3")
    buf: list[np.ndarray] = []
    size = 0
    for row in rows:
        buf.append(row)
        size += row.shape[0]
        if size >= max_block:
            yield np.concatenate(buf)
            buf, size = [], 0
    if buf:
        yield np.concatenate(buf)


def half_lattice_count(d: int, N: int) -> int:
    """Number of representatives (half the number of nonzero |n| <= N points)."""
    return sum(block.shape[0] for block in half_lattice_blocks(d, N))
