"""Composition ranking shared by both kernel backends.

Compositions of m into n parts are ordered lexicographically (smallest first
part first). ``rank_offsets(m, n)[i, r, a]`` is the number of compositions
that agree on the prefix and have a smaller part at position i, given that
r units remain for positions i..n-1 and part i equals a. The rank of a
composition is the sum of those offsets along the prefix.
"""

from functools import lru_cache
from math import comb

import numpy as np


def n_compositions(m: int, k: int) -> int:
    if k == 0:
        return 1 if m == 0 else 0
    return comb(m + k - 1, k - 1)


@lru_cache(maxsize=64)
def rank_offsets(m: int, n: int) -> np.ndarray:
    off = np.zeros((n, m + 1, m + 1), dtype=np.int64)
    for i in range(n):
        k = n - i - 1
        for r in range(m + 1):
            acc = 0
            for a in range(r + 1):
                off[i, r, a] = acc
                acc += n_compositions(r - a, k)
    off.flags.writeable = False
    return off


@lru_cache(maxsize=64)
def compositions(m: int, n: int) -> np.ndarray:
    """All compositions of m into n parts, one per row, in rank order."""
    if n == 1:
        out = np.array([[m]], dtype=np.int64)
    else:
        blocks = []
        for v in range(m + 1):
            tail = compositions(m - v, n - 1)
            head = np.full((tail.shape[0], 1), v, dtype=np.int64)
            blocks.append(np.hstack([head, tail]))
        out = np.vstack(blocks)
    out.flags.writeable = False
    return out


def rank_rows(parts: np.ndarray, m: int) -> np.ndarray:
    """Vectorised rank of each row of ``parts`` (rows must sum to m)."""
    parts = np.asarray(parts, dtype=np.int64)
    n = parts.shape[1]
    off = rank_offsets(m, n)
    remaining = np.full(parts.shape[0], m, dtype=np.int64)
    rank = np.zeros(parts.shape[0], dtype=np.int64)
    for i in range(n):
        rank += off[i, remaining, parts[:, i]]
        remaining -= parts[:, i]
    return rank


@lru_cache(maxsize=16)
def lex_permutations(n: int) -> np.ndarray:
    """All permutations of range(n) in lexicographic order, int8 rows."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rest = lex_permutations(n - 1).astype(np.int8)
    blocks = []
    for k in range(n):
        labels = np.array([x for x in range(n) if x != k], dtype=np.int8)
        head = np.full((rest.shape[0], 1), k, dtype=np.int8)
        blocks.append(np.hstack([head, labels[rest]]))
    out = np.vstack(blocks)
    out.flags.writeable = False
    return out
