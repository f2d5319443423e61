"""Pure-numpy kernels, vectorised over blocks of objects.

Selected with ``DENSEPF_BACKEND=numpy``; also the reference the numba
kernels are tested against.
"""

import numpy as np

from . import _dd
from ._common import lex_permutations, rank_rows

NAME = "numpy"

_RYSER_LOW_BITS = 15


def _permutation_blocks(n):
    """Lexicographic S_n, yielded in n blocks grouped by the first image."""
    rest = lex_permutations(n - 1)
    for k in range(n):
        labels = np.array([x for x in range(n) if x != k], dtype=np.int64)
        block = np.empty((rest.shape[0], n), dtype=np.int64)
        block[:, 0] = k
        block[:, 1:] = labels[rest]
        yield block


def _perm_weights(a, block):
    n = a.shape[0]
    return a[np.arange(n), block].prod(axis=1)


def permanent_enum(a):
    return float(sum(_perm_weights(a, b).sum() for b in _permutation_blocks(a.shape[0])))


def _cycle_lengths(block):
    n = block.shape[1]
    ident = np.arange(n)
    lengths = np.zeros(block.shape, dtype=np.int64)
    cur = block.copy()
    for step in range(1, n + 1):
        hit = (cur == ident) & (lengths == 0)
        lengths[hit] = step
        cur = np.take_along_axis(block, cur, axis=1)
    return lengths


def permutation_stats(a):
    n = a.shape[0]
    by_cycles = np.zeros(n + 1)
    length_mass = np.zeros((n, n + 1))
    total = 0.0
    for block in _permutation_blocks(n):
        w = _perm_weights(a, block)
        total += w.sum()
        lengths = _cycle_lengths(block)
        # c(sigma) = sum_i 1 / l_i(sigma)
        c = np.rint((1.0 / lengths).sum(axis=1)).astype(np.int64)
        by_cycles += np.bincount(c, weights=w, minlength=n + 1)
        for i in range(n):
            length_mass[i] += np.bincount(lengths[:, i], weights=w, minlength=n + 1)
    return float(total), by_cycles, length_mass


def _subset_sums(cols):
    """Double-double row sums for every subset of the columns of ``cols``,
    indexed by bitmask, built by doubling one column at a time."""
    n, k = cols.shape
    hi = np.zeros((1, n))
    lo = np.zeros((1, n))
    for j in range(k):
        h, l = _dd.dd_add(hi, lo, cols[:, j][None, :], 0.0)
        hi = np.concatenate([hi, h])
        lo = np.concatenate([lo, l])
    return hi, lo


def _dd_total(hi, lo):
    """Pairwise double-double sum of a vector."""
    while len(hi) > 1:
        if len(hi) % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        hi, lo = _dd.dd_add(hi[0::2], lo[0::2], hi[1::2], lo[1::2])
    return hi[0], lo[0]


def ryser(a):
    """Ryser over all column subsets in double-double: low columns come from a
    precomputed subset-sum table, high columns are looped over."""
    n = a.shape[0]
    low = min(n, _RYSER_LOW_BITS)
    low_hi, low_lo = _subset_sums(a[:, :low])
    high_hi, high_lo = _subset_sums(a[:, low:])
    low_parity = _popcount(np.arange(1 << low)) % 2
    high_parity = _popcount(np.arange(len(high_hi))) % 2
    tot_hi, tot_lo = 0.0, 0.0
    for h in range(len(high_hi)):
        r_hi, r_lo = _dd.dd_add(low_hi, low_lo, high_hi[h][None, :], high_lo[h][None, :])
        p_hi, p_lo = r_hi[:, 0], r_lo[:, 0]
        for i in range(1, n):
            p_hi, p_lo = _dd.dd_mul(p_hi, p_lo, r_hi[:, i], r_lo[:, i])
        sign = np.where((low_parity + high_parity[h]) % 2 == 1, -1.0, 1.0)
        s_hi, s_lo = _dd_total(sign * p_hi, sign * p_lo)
        tot_hi, tot_lo = _dd.dd_add(tot_hi, tot_lo, s_hi, s_lo)
    total = float(tot_hi + tot_lo)
    return -total if n % 2 == 1 else total


def _popcount(x):
    c = np.zeros_like(x)
    while np.any(x):
        c += x & 1
        x = x >> 1
    return c


def ham_dp(a):
    """Held-Karp over subsets of {1..n-1}, processed one popcount layer at a time."""
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    m = n - 1
    size = 1 << m
    inner = a[1:, 1:]
    dp = np.zeros((size, m))
    singles = 1 << np.arange(m)
    dp[singles, np.arange(m)] = a[0, 1:]
    masks = np.arange(size)
    popcount = ((masks[:, None] >> np.arange(m)) & 1).sum(axis=1)
    for k in range(1, m):
        layer = masks[popcount == k]
        ext = dp[layer] @ inner
        for w in range(m):
            sel = (layer >> w) & 1 == 0
            dp[layer[sel] | (1 << w), w] += ext[sel, w]
    return float(dp[size - 1] @ a[1:, 0])


def walk_masses(a, offsets, n_comp):
    n = a.shape[0]
    seqs = np.indices((n,) * n).reshape(n, -1).T
    nxt = np.roll(seqs, -1, axis=1)
    w = a[seqs, nxt].prod(axis=1)
    counts = (seqs[:, :, None] == np.arange(n)).sum(axis=1)
    return np.bincount(rank_rows(counts, n), weights=w, minlength=n_comp)


def tree_masses(a, offsets, n_comp):
    n = a.shape[0]
    L = n - 2
    masses = np.zeros(n_comp)
    tails = np.indices((n,) * (L - 1)).reshape(L - 1, -1).T if L > 1 else np.zeros((1, 0), dtype=np.int64)
    ar = np.arange(n)
    for first in range(n):
        seqs = np.empty((tails.shape[0], L), dtype=np.int64)
        seqs[:, 0] = first
        seqs[:, 1:] = tails
        rows = np.arange(seqs.shape[0])
        counts = (seqs[:, :, None] == ar).sum(axis=1)
        deg = counts + 1
        w = np.ones(seqs.shape[0])
        for k in range(L):
            leaf = np.argmax(deg == 1, axis=1)
            x = seqs[:, k]
            w *= a[leaf, x]
            deg[rows, leaf] = 0
            deg[rows, x] -= 1
        ones = deg == 1
        u = np.argmax(ones, axis=1)
        v = n - 1 - np.argmax(ones[:, ::-1], axis=1)
        w *= a[u, v]
        masses += np.bincount(rank_rows(counts, L), weights=w, minlength=n_comp)
    return masses
