"""numba kernels. Same signatures as ``_np``; enumeration order matches, so
results agree to rounding (Ryser to a few ulps, the rest bit for bit)."""

import numba as nb
import numpy as np

from . import _dd

NAME = "numba"


@nb.njit(cache=True)
def _next_permutation(p):
    n = p.shape[0]
    i = n - 2
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while p[j] <= p[i]:
        j -= 1
    p[i], p[j] = p[j], p[i]
    lo = i + 1
    hi = n - 1
    while lo < hi:
        p[lo], p[hi] = p[hi], p[lo]
        lo += 1
        hi -= 1
    return True


@nb.njit(cache=True)
def permanent_enum(a):
    n = a.shape[0]
    p = np.arange(n)
    total = 0.0
    while True:
        w = 1.0
        for i in range(n):
            w *= a[i, p[i]]
        total += w
        if not _next_permutation(p):
            break
    return total


@nb.njit(cache=True)
def permutation_stats(a):
    """Returns (per A, mass by cycle count, mass by (vertex, cycle length)).

    ``by_cycles[c]`` sums weights of permutations with c cycles and
    ``length_mass[i, l]`` those where vertex i lies on a cycle of length l.
    """
    n = a.shape[0]
    p = np.arange(n)
    seen = np.zeros(n, dtype=np.bool_)
    members = np.zeros(n, dtype=np.int64)
    by_cycles = np.zeros(n + 1)
    length_mass = np.zeros((n, n + 1))
    total = 0.0
    while True:
        w = 1.0
        for i in range(n):
            w *= a[i, p[i]]
        total += w
        seen[:] = False
        c = 0
        for s in range(n):
            if seen[s]:
                continue
            c += 1
            length = 0
            v = s
            while not seen[v]:
                seen[v] = True
                members[length] = v
                length += 1
                v = p[v]
            for t in range(length):
                length_mass[members[t], length] += w
        by_cycles[c] += w
        if not _next_permutation(p):
            break
    return total, by_cycles, length_mass


two_sum = nb.njit(inline="always")(_dd.two_sum)
quick_two_sum = nb.njit(inline="always")(_dd.quick_two_sum)
two_prod = nb.njit(inline="always")(_dd.two_prod)


@nb.njit(inline="always")
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    s, e = quick_two_sum(s, e + t)
    return quick_two_sum(s, e + f)


@nb.njit(inline="always")
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    return quick_two_sum(p, e + (ah * bl + al * bh))


@nb.njit(cache=True)
def ryser(a):
    """Gray-code Ryser with row sums, products and the total in double-double,
    so the alternating sum loses nothing to cancellation at double precision."""
    n = a.shape[0]
    rs_hi = np.zeros(n)
    rs_lo = np.zeros(n)
    tot_hi = 0.0
    tot_lo = 0.0
    sign = 1.0
    for k in range(1, 1 << n):
        j = 0
        while not (k >> j) & 1:
            j += 1
        gray = k ^ (k >> 1)
        step = 1.0 if (gray >> j) & 1 else -1.0
        for i in range(n):
            rs_hi[i], rs_lo[i] = dd_add(rs_hi[i], rs_lo[i], step * a[i, j], 0.0)
        sign = -sign
        p_hi = 1.0
        p_lo = 0.0
        for i in range(n):
            p_hi, p_lo = dd_mul(p_hi, p_lo, rs_hi[i], rs_lo[i])
        tot_hi, tot_lo = dd_add(tot_hi, tot_lo, sign * p_hi, sign * p_lo)
    total = tot_hi + tot_lo
    if n % 2 == 1:
        total = -total
    return total


@nb.njit(cache=True)
def ham_dp(a):
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    m = n - 1
    size = 1 << m
    dp = np.zeros((size, m))
    for v in range(m):
        dp[1 << v, v] = a[0, v + 1]
    for mask in range(1, size):
        for v in range(m):
            x = dp[mask, v]
            if x == 0.0:
                continue
            for w in range(m):
                if (mask >> w) & 1:
                    continue
                dp[mask | (1 << w), w] += x * a[v + 1, w + 1]
    total = 0.0
    for v in range(m):
        total += dp[size - 1, v] * a[v + 1, 0]
    return total


@nb.njit(cache=True)
def _rank(counts, offsets, m):
    r = 0
    remaining = m
    for i in range(counts.shape[0]):
        r += offsets[i, remaining, counts[i]]
        remaining -= counts[i]
    return r


@nb.njit(cache=True)
def walk_masses(a, offsets, n_comp):
    """Weight of all n^n closed walks, binned by arrival-count composition."""
    n = a.shape[0]
    seq = np.zeros(n, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    masses = np.zeros(n_comp)
    while True:
        w = 1.0
        counts[:] = 0
        for k in range(n):
            nxt = seq[k + 1] if k + 1 < n else seq[0]
            w *= a[seq[k], nxt]
            counts[nxt] += 1
        masses[_rank(counts, offsets, n)] += w
        # odometer, last position fastest
        k = n - 1
        while k >= 0 and seq[k] == n - 1:
            seq[k] = 0
            k -= 1
        if k < 0:
            break
        seq[k] += 1
    return masses


@nb.njit(cache=True)
def tree_masses(a, offsets, n_comp):
    """Weight of all spanning trees of K_n (n >= 3) via Pruefer decoding,
    binned by the composition deg - 1, which equals the Pruefer letter counts."""
    n = a.shape[0]
    L = n - 2
    seq = np.zeros(L, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    masses = np.zeros(n_comp)
    while True:
        counts[:] = 0
        for k in range(L):
            counts[seq[k]] += 1
        for v in range(n):
            deg[v] = counts[v] + 1
        w = 1.0
        for k in range(L):
            leaf = 0
            while deg[leaf] != 1:
                leaf += 1
            x = seq[k]
            w *= a[leaf, x]
            deg[leaf] = 0
            deg[x] -= 1
        u = -1
        for v in range(n):
            if deg[v] == 1:
                if u < 0:
                    u = v
                else:
                    w *= a[u, v]
                    break
        masses[_rank(counts, offsets, L)] += w
        k = L - 1
        while k >= 0 and seq[k] == n - 1:
            seq[k] = 0
            k -= 1
        if k < 0:
            break
        seq[k] += 1
    return masses
