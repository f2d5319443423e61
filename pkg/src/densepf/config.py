"""Enumeration caps and backend selection.

Caps are read from the environment on every call so that the CLI and tests
can override them without re-importing anything::

    DENSEPF_CAP_PERMUTATIONS  (default 10)   exhaustive S_n enumeration
    DENSEPF_CAP_RYSER         (default 24)   Ryser inclusion-exclusion
    DENSEPF_CAP_HAM_DP        (default 20)   Held-Karp Hamiltonian cycle DP
    DENSEPF_CAP_WALKS         (default 7)    n^n closed walks
    DENSEPF_CAP_TREES         (default 9)    n^(n-2) Pruefer sequences
    DENSEPF_CAP_EXACT_PER     (default 20)   exact permanent inside brackets

The numeric kernels run under numba when it is importable, unless
``DENSEPF_BACKEND=numpy`` is set (read once, at import of
:mod:`densepf.kernels`).
"""

import os
from dataclasses import dataclass

DEFAULT_CAPS = {
    "permutations": 10,
    "ryser": 24,
    "ham_dp": 20,
    "walks": 7,
    "trees": 9,
    "exact_per": 20,
}


@dataclass(frozen=True)
class Caps:
    permutations: int
    ryser: int
    ham_dp: int
    walks: int
    trees: int
    exact_per: int


def caps() -> Caps:
    values = {}
    for name, default in DEFAULT_CAPS.items():
        raw = os.environ.get(f"DENSEPF_CAP_{name.upper()}")
        values[name] = int(raw) if raw else default
    return Caps(**values)


def backend_name() -> str:
    return os.environ.get("DENSEPF_BACKEND", "numba").strip().lower()
