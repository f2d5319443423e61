"""Hot enumeration kernels with a numba path and a pure-numpy path.

``active`` is chosen once at import: numba unless ``DENSEPF_BACKEND=numpy``
or numba cannot be imported. Both backends stay importable so the test suite
and ``benchmarks/bench_kernels.py`` can compare them directly.
"""

import numpy as np

from ..config import backend_name
from . import _np as numpy_backend
from ._common import compositions, lex_permutations, n_compositions, rank_offsets, rank_rows

try:
    from . import _jit as numba_backend
except ImportError:  # numba missing
    numba_backend = None

if backend_name() == "numpy" or numba_backend is None:
    active = numpy_backend
else:
    active = numba_backend

BACKEND = active.NAME


def _arr(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def backends():
    """Mapping name -> backend module for every importable backend."""
    out = {"numpy": numpy_backend}
    if numba_backend is not None:
        out["numba"] = numba_backend
    return out


def permanent_enum(a, backend=None):
    return float((backend or active).permanent_enum(_arr(a)))


def permutation_stats(a, backend=None):
    total, by_cycles, length_mass = (backend or active).permutation_stats(_arr(a))
    return float(total), np.asarray(by_cycles), np.asarray(length_mass)


def ryser(a, backend=None):
    return float((backend or active).ryser(_arr(a)))


def ham_dp(a, backend=None):
    return float((backend or active).ham_dp(_arr(a)))


def walk_masses(a, backend=None):
    """Masses indexed like ``compositions(n, n)``."""
    a = _arr(a)
    n = a.shape[0]
    return (backend or active).walk_masses(a, rank_offsets(n, n), n_compositions(n, n))


def tree_masses(a, backend=None):
    """Masses indexed like ``compositions(n - 2, n)``; needs n >= 2."""
    a = _arr(a)
    n = a.shape[0]
    if n == 2:
        return np.array([a[0, 1]])
    return (backend or active).tree_masses(a, rank_offsets(n - 2, n), n_compositions(n - 2, n))


__all__ = [
    "BACKEND", "active", "backends", "compositions", "ham_dp", "lex_permutations",
    "n_compositions", "numba_backend", "numpy_backend", "permanent_enum",
    "permutation_stats", "rank_offsets", "rank_rows", "ryser", "tree_masses",
    "walk_masses",
]
