"""Plain-text graph and CSV matrix files.

Graph files: first line ``n m``, then ``m`` lines ``i j`` with 1-based,
directed endpoints. Blank lines and ``#`` comments are skipped. Matrix files:
n rows of n comma-separated decimals; delta is supplied by the caller.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import DirectedGraph, SymmetricWeightMatrix, WeightMatrix
from .errors import InvariantError, ParseError


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield lineno, text


def _ints(path, lineno, text, count):
    parts = text.split()
    if len(parts) != count:
        raise ParseError(path, lineno, f"expected {count} integers, got {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(path, lineno, f"expected integers, got {text!r}") from None


def ingest_graph(path) -> DirectedGraph:
    path = str(path)
    lines = _lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "empty graph file") from None
    n, m = _ints(path, lineno, header, 2)
    if n < 1 or m < 0:
        raise ParseError(path, lineno, f"bad header n={n} m={m}")
    edges = set()
    for lineno, text in lines:
        if len(edges) == m:
            raise ParseError(path, lineno, f"more than the {m} edges declared")
        i, j = _ints(path, lineno, text, 2)
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(path, lineno, f"vertex out of range 1..{n}: {text!r}")
        if i == j:
            raise InvariantError(f"{path}:{lineno}: loop at vertex {i}")
        if (i - 1, j - 1) in edges:
            raise InvariantError(f"{path}:{lineno}: duplicate edge {i} -> {j}")
        edges.add((i - 1, j - 1))
    if len(edges) != m:
        raise ParseError(path, lineno, f"header declares {m} edges, found {len(edges)}")
    return DirectedGraph(n, frozenset(edges))


def _read_csv(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise ParseError(path, lineno, f"non-numeric entry in {row!r}") from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(path, lineno,
                                 f"expected {len(rows[0])} entries, got {len(rows[-1])}")
    if not rows:
        raise ParseError(path, 1, "empty matrix file")
    if len(rows) != len(rows[0]):
        raise ParseError(path, len(rows), f"matrix is {len(rows)} x {len(rows[0])}, not square")
    return np.array(rows)


def ingest_matrix(path, delta: float) -> WeightMatrix:
    """Read a CSV matrix; an entry outside [delta, 1] raises
    :class:`EntryOutOfBounds` naming the 1-based cell."""
    return WeightMatrix(_read_csv(str(path)), delta)


def ingest_symmetric(path, delta: float) -> SymmetricWeightMatrix:
    return SymmetricWeightMatrix(_read_csv(str(path)), delta)


def write_graph(graph: DirectedGraph, path) -> None:
    edges = graph.sorted_edges()
    lines = [f"{graph.n} {len(edges)}"] + [f"{i + 1} {j + 1}" for i, j in edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_matrix(a, path) -> None:
    """Write with ``repr`` precision so reading back is exact."""
    m = np.asarray(getattr(a, "entries", a), dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in m:
            w.writerow([repr(float(x)) for x in row])
