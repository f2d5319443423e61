"""Weight matrices, graphs, the graph perturbation and log-domain scalars.

Vertices are 0-based everywhere in the Python API. Files and CLI output use
1-based labels; the conversion happens in :mod:`densepf.io`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import total_ordering

import numpy as np

from .errors import BadDelta, EntryOutOfBounds, InvariantError

NEG_INF = float("-inf")


@total_ordering
@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(logmag)``.

    Needed because per A, (n-1)! and friends leave the float range long
    before the polynomial-time routines stop being useful.
    """

    sign: int
    logmag: float = NEG_INF

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", NEG_INF)
        elif math.isnan(self.logmag) or self.logmag == NEG_INF:
            raise ValueError(f"bad logmag {self.logmag!r} for nonzero value")
        else:
            object.__setattr__(self, "logmag", float(self.logmag))

    @classmethod
    def zero(cls) -> LogValue:
        return cls(0)

    @classmethod
    def one(cls) -> LogValue:
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, x: float) -> LogValue:
        if x == 0:
            return cls(0)
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r}")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, logmag: float) -> LogValue:
        """Positive value with the given natural log (``-inf`` gives zero)."""
        if logmag == NEG_INF:
            return cls(0)
        return cls(1, logmag)

    @property
    def value(self) -> float:
        """Native float; overflows to ``inf`` for huge magnitudes."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    @property
    def log(self) -> float:
        """Natural log of a positive value."""
        if self.sign < 0:
            raise ValueError("log of a negative LogValue")
        return self.logmag

    def __mul__(self, other: LogValue) -> LogValue:
        return log_mul(self, other)

    def __add__(self, other: LogValue) -> LogValue:
        return log_add(self, other)

    def __neg__(self) -> LogValue:
        return LogValue(-self.sign, self.logmag)

    def __sub__(self, other: LogValue) -> LogValue:
        return log_add(self, -other)

    def __truediv__(self, other: LogValue) -> LogValue:
        if other.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return self
        return LogValue(self.sign * other.sign, self.logmag - other.logmag)

    def _key(self):
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.logmag)

    def __lt__(self, other: LogValue) -> bool:
        return self._key() < other._key()

    def isclose(self, other: LogValue, rel: float = 1e-9) -> bool:
        if self.sign != other.sign:
            return False
        if self.sign == 0:
            return True
        # |log(x/y)| <= log1p(rel) is the relative test in the log domain
        return abs(self.logmag - other.logmag) <= math.log1p(rel)

    def to_json(self) -> dict:
        out = {"sign": self.sign, "log": None if self.sign == 0 else self.logmag}
        v = self.value
        out["value"] = v if math.isfinite(v) else None
        return out

    @classmethod
    def from_json(cls, data: dict) -> LogValue:
        if data["sign"] == 0:
            return cls(0)
        return cls(data["sign"], data["log"])

    def __repr__(self):
        if self.sign == 0:
            return "LogValue(0)"
        return f"LogValue({'-' if self.sign < 0 else ''}exp({self.logmag!r}))"


def log_mul(x: LogValue, y: LogValue) -> LogValue:
    if x.sign == 0 or y.sign == 0:
        return LogValue(0)
    return LogValue(x.sign * y.sign, x.logmag + y.logmag)


def log_add(x: LogValue, y: LogValue) -> LogValue:
    if x.sign == 0:
        return y
    if y.sign == 0:
        return x
    if x.logmag < y.logmag:
        x, y = y, x
    d = y.logmag - x.logmag  # <= 0
    if x.sign == y.sign:
        return LogValue(x.sign, x.logmag + math.log1p(math.exp(d)))
    if d == 0.0:
        return LogValue(0)
    return LogValue(x.sign, x.logmag + math.log1p(-math.exp(d)))


def log_sum(values) -> LogValue:
    """Sum an iterable of LogValues (fixed left-to-right order)."""
    total = LogValue(0)
    for v in values:
        total = log_add(total, v)
    return total


def _frozen_array(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvariantError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvariantError("matrix entries must be finite")
    a.flags.writeable = False
    return a


def _check_delta(delta, upper_open=False):
    delta = float(delta)
    ok = 0 < delta < 1 if upper_open else 0 < delta <= 1
    if not ok:
        raise BadDelta(delta, "(0, 1)" if upper_open else "(0, 1]")
    return delta


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """n x n matrix with every entry in [delta, 1].

    ``delta`` is the certified bound supplied by the caller, not the smallest
    entry; theorem constants are computed from it.
    """

    entries: np.ndarray
    delta: float

    def __post_init__(self):
        delta = _check_delta(self.delta)
        a = _frozen_array(self.entries)
        bad = np.argwhere((a < delta) | (a > 1.0))
        if len(bad):
            i, j = bad[0]
            raise EntryOutOfBounds(int(i) + 1, int(j) + 1, float(a[i, j]), delta)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True, eq=False)
class SymmetricWeightMatrix:
    """Symmetric weights on the edges of K_n; the diagonal is ignored."""

    entries: np.ndarray
    delta: float

    def __post_init__(self):
        delta = _check_delta(self.delta)
        a = _frozen_array(self.entries)
        if not np.array_equal(a, a.T):
            raise InvariantError("matrix is not exactly symmetric")
        off = ~np.eye(a.shape[0], dtype=bool)
        bad = np.argwhere(off & ((a < delta) | (a > 1.0)))
        if len(bad):
            i, j = bad[0]
            raise EntryOutOfBounds(int(i) + 1, int(j) + 1, float(a[i, j]), delta)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class DirectedGraph:
    """Loopless digraph on vertices 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise InvariantError(f"graph needs n >= 1, got {self.n}")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if i == j:
                raise InvariantError(f"loop at vertex {i + 1}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvariantError(f"edge ({i + 1},{j + 1}) out of range 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def complete(cls, n: int) -> DirectedGraph:
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n) if i != j))

    @classmethod
    def empty(cls, n: int) -> DirectedGraph:
        return cls(n, frozenset())

    @classmethod
    def cycle(cls, n: int) -> DirectedGraph:
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n) if n > 1))

    @classmethod
    def from_adjacency(cls, adj) -> DirectedGraph:
        adj = np.asarray(adj)
        n = adj.shape[0]
        return cls(n, frozenset(
            (i, j) for i in range(n) for j in range(n) if i != j and adj[i, j]
        ))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = 1.0
        return a

    def sorted_edges(self) -> list:
        return sorted(self.edges)


def make_weight_matrix(entries, delta: float) -> WeightMatrix:
    return WeightMatrix(np.asarray(entries, dtype=np.float64), delta)


def make_symmetric_matrix(entries, delta: float) -> SymmetricWeightMatrix:
    return SymmetricWeightMatrix(np.asarray(entries, dtype=np.float64), delta)


def perturb(graph: DirectedGraph, delta: float) -> WeightMatrix:
    """Weights 1 on edges and ``delta`` on non-edges, the diagonal included."""
    delta = _check_delta(delta, upper_open=True)
    b = np.full((graph.n, graph.n), delta)
    for i, j in graph.edges:
        b[i, j] = 1.0
    return WeightMatrix(b, delta)


def graph_of(b: WeightMatrix) -> DirectedGraph:
    """Edges of a perturbed matrix: off-diagonal entries equal to 1."""
    return DirectedGraph.from_adjacency(b.entries == 1.0)


def random_weight_matrix(n: int, delta: float, rng: np.random.Generator) -> WeightMatrix:
    """Entries i.i.d. uniform on [delta, 1]."""
    return WeightMatrix(rng.uniform(delta, 1.0, size=(n, n)), delta)


def random_symmetric_matrix(
    n: int, delta: float, rng: np.random.Generator
) -> SymmetricWeightMatrix:
    """Upper triangle i.i.d. uniform on [delta, 1], mirrored; zero diagonal."""
    a = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    a[iu] = rng.uniform(delta, 1.0, size=len(iu[0]))
    a = a + a.T
    return SymmetricWeightMatrix(a, delta)


def random_graph(n: int, p: float, rng: np.random.Generator) -> DirectedGraph:
    """Directed Erdos-Renyi graph: each of the n(n-1) arcs kept with prob. p."""
    keep = rng.random((n, n)) < p
    np.fill_diagonal(keep, False)
    return DirectedGraph.from_adjacency(keep)
