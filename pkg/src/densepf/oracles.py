"""Exact partition functions by exhaustive enumeration or exact DP.

Everything here is ground truth for the polynomial-time routines and for the
concentration checks, so nothing is approximated: sums are accumulated in a
fixed (lexicographic) order and are reproducible bit for bit on a given
backend. Sizes are limited by the caps in :mod:`densepf.config`.

Matrices may be :class:`~densepf.core.WeightMatrix` instances or plain
nonnegative arrays (0-1 adjacency matrices, for instance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .config import caps
from .core import LogValue
from .errors import InvariantError, SameCycle, TooLarge


def _entries(a) -> np.ndarray:
    arr = np.asarray(getattr(a, "entries", a), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvariantError(f"expected a square matrix, got shape {arr.shape}")
    if np.any(arr < 0):
        raise InvariantError("oracles need nonnegative weights")
    return arr


def _require(n: int, cap: int, what: str):
    if n > cap:
        raise TooLarge(n, cap, what)


# ---------------------------------------------------------------------------
# combinatorial objects


@dataclass(frozen=True)
class Permutation:
    """``images[i]`` is sigma(i); vertices are 0-based."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise InvariantError(f"{images} is not a permutation")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_cycles(cls, n: int, cycles) -> Permutation:
        images = list(range(n))
        for cyc in cycles:
            for k, v in enumerate(cyc):
                images[v] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    @cached_property
    def cycles(self) -> tuple:
        """Cycles listed from their smallest element, ordered by it."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            cyc = []
            v = s
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = self.images[v]
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def n_cycles(self) -> int:
        return len(self.cycles)

    def cycle_length(self, i: int) -> int:
        for cyc in self.cycles:
            if i in cyc:
                return len(cyc)
        raise IndexError(i)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def weight(self, a) -> float:
        a = _entries(a)
        return math.prod(a[i, j] for i, j in enumerate(self.images))


def all_permutations(n: int):
    """S_n in lexicographic order."""
    for row in kernels.lex_permutations(n):
        yield Permutation(tuple(row))


@dataclass(frozen=True)
class ClosedWalk:
    """The closed walk v_0 -> v_1 -> ... -> v_{n-1} -> v_0."""

    vertices: tuple
    n: int

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        if any(not 0 <= v < self.n for v in vertices):
            raise InvariantError(f"walk {vertices} leaves the vertex set 0..{self.n - 1}")
        object.__setattr__(self, "vertices", vertices)

    @property
    def degrees(self) -> tuple:
        """Arrivals at each vertex; a self-loop step counts once."""
        deg = [0] * self.n
        for v in self.vertices:
            deg[v] += 1
        return tuple(deg)

    def weight(self, a) -> float:
        a = _entries(a)
        vs = self.vertices
        return math.prod(a[vs[k], vs[(k + 1) % len(vs)]] for k in range(len(vs)))


def all_walks(n: int):
    for idx in np.ndindex(*(n,) * n):
        yield ClosedWalk(idx, n)


@dataclass(frozen=True)
class SpanningTree:
    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        if len(edges) != self.n - 1 or any(u == v for u, v in edges):
            raise InvariantError(f"{sorted(edges)} is not a spanning tree of K_{self.n}")
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvariantError(f"edge {(u, v)} out of range")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InvariantError(f"{sorted(edges)} contains a cycle")
            parent[ru] = rv
        object.__setattr__(self, "edges", edges)

    @property
    def degrees(self) -> tuple:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def neighbors(self, v: int) -> list:
        return sorted(({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v}))

    def path(self, s: int, t: int) -> list:
        """Vertices of the unique s-t path, s first."""
        prev = {s: None}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        out = [t]
        while out[-1] != s:
            out.append(prev[out[-1]])
        return out[::-1]

    def weight(self, a) -> float:
        a = _entries(a)
        return math.prod(a[u, v] for u, v in self.edges)


def prufer_decode(seq, n: int) -> SpanningTree:
    seq = [int(x) for x in seq]
    if len(seq) != n - 2:
        raise InvariantError(f"Pruefer sequence for n={n} needs length {n - 2}")
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    for x in seq:
        leaf = deg.index(1)
        edges.append((leaf, x))
        deg[leaf] = 0
        deg[x] -= 1
    u = deg.index(1)
    v = deg.index(1, u + 1)
    edges.append((u, v))
    return SpanningTree(n, frozenset(edges))


def prufer_encode(tree: SpanningTree) -> tuple:
    adj = {v: set(tree.neighbors(v)) for v in range(tree.n)}
    seq = []
    for _ in range(tree.n - 2):
        leaf = min(v for v in adj if len(adj[v]) == 1)
        (x,) = adj.pop(leaf)
        adj[x].discard(leaf)
        seq.append(x)
    return tuple(seq)


def all_spanning_trees(n: int):
    """T_n in Pruefer-lexicographic order."""
    for seq in np.ndindex(*(n,) * (n - 2)):
        yield prufer_decode(seq, n)


# ---------------------------------------------------------------------------
# permanents and Hamiltonian permanents


@dataclass(frozen=True)
class PermutationProfile:
    """Exhaustive statistics of the measure P(sigma) ~ prod a_{i sigma(i)}.

    ``by_cycles[c]`` is the weight of permutations with c cycles and
    ``length_mass[i, l]`` the weight of those putting vertex i on a cycle of
    length l.
    """

    total: float
    by_cycles: np.ndarray
    length_mass: np.ndarray

    @property
    def n(self) -> int:
        return self.length_mass.shape[0]


def permutation_profile(a) -> PermutationProfile:
    arr = _entries(a)
    _require(arr.shape[0], caps().permutations, "permutation enumeration")
    total, by_cycles, length_mass = kernels.permutation_stats(arr)
    return PermutationProfile(total, by_cycles, length_mass)


def permanent_naive(a) -> LogValue:
    arr = _entries(a)
    _require(arr.shape[0], caps().permutations, "permanent_naive")
    return LogValue.from_float(kernels.permanent_enum(arr))


def permanent_ryser(a) -> LogValue:
    arr = _entries(a)
    _require(arr.shape[0], caps().ryser, "permanent_ryser")
    return LogValue.from_float(max(kernels.ryser(arr), 0.0))


def hamiltonian_permanent(a, method: str = "dp") -> LogValue:
    """Weighted count of Hamiltonian cycles (single-cycle permutations)."""
    arr = _entries(a)
    n = arr.shape[0]
    if method == "naive":
        _require(n, caps().permutations, "hamiltonian_permanent(naive)")
        return LogValue.from_float(kernels.permutation_stats(arr)[1][1])
    if method == "dp":
        _require(n, caps().ham_dp, "hamiltonian_permanent(dp)")
        return LogValue.from_float(kernels.ham_dp(arr))
    raise ValueError(f"unknown method {method!r}")


def permanent_cycle_restricted(a, cmax: int, profile: PermutationProfile | None = None) -> LogValue:
    """Sum over permutations with at most ``cmax`` cycles."""
    profile = profile or permutation_profile(a)
    cmax = max(0, min(int(cmax), profile.n))
    return LogValue.from_float(float(profile.by_cycles[: cmax + 1].sum()))


def cycle_length_distribution(a, i: int, profile: PermutationProfile | None = None) -> np.ndarray:
    """``out[m - 1] = P(l_i = m)`` for m = 1..n."""
    profile = profile or permutation_profile(a)
    return profile.length_mass[i, 1:] / profile.total


def expected_cycle_count(a, profile: PermutationProfile | None = None) -> float:
    profile = profile or permutation_profile(a)
    c = np.arange(profile.n + 1)
    return float(c @ profile.by_cycles / profile.total)


# ---------------------------------------------------------------------------
# walks and trees


@dataclass(frozen=True)
class CompositionProfile:
    """Weight of walks (or trees) binned by degree composition."""

    m: int
    parts: np.ndarray
    masses: np.ndarray

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def restricted(self, max_part: int) -> float:
        keep = self.parts.max(axis=1) <= max_part
        return float(self.masses[keep].sum())


def walk_profile(a) -> CompositionProfile:
    """Closed walks of length n binned by arrival counts (sum n)."""
    arr = _entries(a)
    n = arr.shape[0]
    _require(n, caps().walks, "walk enumeration")
    return CompositionProfile(n, kernels.compositions(n, n), kernels.walk_masses(arr))


def tree_profile(a) -> CompositionProfile:
    """Spanning trees binned by deg - 1 (sum n - 2)."""
    arr = _entries(a)
    n = arr.shape[0]
    if n < 2:
        raise InvariantError("spanning trees need n >= 2")
    _require(n, caps().trees, "tree enumeration")
    return CompositionProfile(n - 2, kernels.compositions(n - 2, n), kernels.tree_masses(arr))


def walk_sum_restricted(a, degmax: int) -> LogValue:
    """Sum of weight(pi) over closed walks with every arrival count <= degmax.

    Walks are vertex sequences, so the n rotations of a Hamiltonian cycle are
    distinct walks and ``degmax=1`` yields n * ham A.
    """
    return LogValue.from_float(walk_profile(a).restricted(degmax))


def tree_sum_restricted(a, degmax: int) -> LogValue:
    """Sum of weight(tau) over spanning trees with every degree <= degmax."""
    return LogValue.from_float(tree_profile(a).restricted(degmax - 1))


# ---------------------------------------------------------------------------
# proof devices on permutations


def patch_to_hamiltonian(sigma: Permutation) -> Permutation:
    """Patch the cycles of sigma into one cycle.

    Cycles are ordered by their largest elements j_1 < ... < j_r; the arc
    i_k -> j_k entering j_k is redirected to j_{k+1} (cyclically).
    """
    tops = sorted(max(c) for c in sigma.cycles)
    r = len(tops)
    images = list(sigma.images)
    inv = sigma.inverse().images
    for k in range(r):
        images[inv[tops[k]]] = tops[(k + 1) % r]
    return Permutation(tuple(images))


def merge_cycles(sigma: Permutation, i: int, r: int) -> Permutation:
    """Splice the cycle through r into the cycle through i.

    With i = j_1 -> ... -> j_m -> i and r = j_{m+1} -> ... -> j_{m+k} -> r,
    the result is i -> j_2 -> ... -> j_m -> r -> ... -> j_{m+k} -> i.
    """
    cyc_i = next(c for c in sigma.cycles if i in c)
    if r in cyc_i:
        raise SameCycle(f"{r} lies on the cycle of {i}")
    inv = sigma.inverse().images
    images = list(sigma.images)
    images[inv[i]] = r
    images[inv[r]] = i
    return Permutation(tuple(images))


def split_cycle(tau: Permutation, i: int, m: int) -> Permutation:
    """Inverse of :func:`merge_cycles`: cut the cycle through i after m steps."""
    walk = [i]
    while len(walk) < m:
        walk.append(tau.images[walk[-1]])
    last = walk[-1]
    r = tau.images[last]
    if r == i:
        raise InvariantError("cycle of i has length m; nothing to split")
    images = list(tau.images)
    images[tau.inverse().images[i]] = r
    images[last] = i
    return Permutation(tuple(images))
