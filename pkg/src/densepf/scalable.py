"""Polynomial-time partition functions.

* ``trace_power``: trace A^k, the weight of all closed walks of length k.
* ``spanning_tree_pf``: spt A by the weighted matrix-tree theorem.
* ``sinkhorn_scale`` / ``permanent_bracket``: a certified bracket on per A
  from doubly stochastic scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .config import caps
from .core import LogValue, SymmetricWeightMatrix, WeightMatrix
from .errors import InvariantError, NotConverged
from .oracles import permanent_ryser

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class PartitionReport:
    value: LogValue
    lower: LogValue
    upper: LogValue
    method: str
    iterations: int = 0
    exact: LogValue | None = None
    residual: float | None = None

    def __post_init__(self):
        if not (self.lower <= self.value <= self.upper):
            raise InvariantError(f"report bracket out of order: {self}")

    @property
    def log_ratio(self) -> float | None:
        """log(upper / exact) when the exact value was computed."""
        if self.exact is None or self.exact.sign == 0:
            return None
        return self.upper.logmag - self.exact.logmag

    def contains(self, x: LogValue) -> bool:
        return self.lower <= x <= self.upper

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "value": self.value.to_json(),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "iterations": self.iterations,
            "exact": None if self.exact is None else self.exact.to_json(),
            "log_ratio_upper_exact": self.log_ratio,
            "residual": self.residual,
        }


def _exact_report(value: LogValue, method: str) -> PartitionReport:
    return PartitionReport(value, value, value, method)


def trace_power(a, k: int) -> LogValue:
    """trace A^k by repeated squaring, renormalising to keep entries O(1)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = np.array(getattr(a, "entries", a), dtype=np.float64)

    def renorm(x, s):
        top = np.abs(x).max()
        if top == 0:
            return x, s
        return x / top, s + math.log(top)

    base, base_log = renorm(m, 0.0)
    result, result_log = None, 0.0
    while k:
        if k & 1:
            if result is None:
                result, result_log = base.copy(), base_log
            else:
                result, result_log = renorm(result @ base, result_log + base_log)
        k >>= 1
        if k:
            base, base_log = renorm(base @ base, 2 * base_log)
    tr = float(np.trace(result))
    if tr == 0:
        return LogValue(0)
    return LogValue(1 if tr > 0 else -1, math.log(abs(tr)) + result_log)


def laplacian(a) -> np.ndarray:
    """L_ii = sum_{j != i} a_ij, L_ij = -a_ij; the diagonal of A is ignored."""
    w = np.array(getattr(a, "entries", a), dtype=np.float64)
    np.fill_diagonal(w, 0.0)
    return np.diag(w.sum(axis=1)) - w


def spanning_tree_pf(a: SymmetricWeightMatrix, cofactor: int = 0) -> LogValue:
    """spt A as the determinant of the Laplacian with row and column
    ``cofactor`` deleted (LU with partial pivoting, log form)."""
    lap = laplacian(a)
    n = lap.shape[0]
    if n < 2:
        raise InvariantError("spanning_tree_pf needs n >= 2")
    keep = np.delete(np.arange(n), cofactor)
    sign, logdet = np.linalg.slogdet(lap[np.ix_(keep, keep)])
    if sign == 0:
        return LogValue(0)
    return LogValue(int(sign), float(logdet))


@dataclass(frozen=True)
class ScalingResult:
    """D = diag(x) A diag(y) with factors kept as logs."""

    log_row: np.ndarray
    log_col: np.ndarray
    scaled: np.ndarray
    residual: float
    iterations: int

    @property
    def row_factors(self) -> np.ndarray:
        return np.exp(self.log_row)

    @property
    def col_factors(self) -> np.ndarray:
        return np.exp(self.log_col)


def _residual(d):
    return max(np.abs(d.sum(axis=1) - 1).max(), np.abs(d.sum(axis=0) - 1).max())


def sinkhorn_scale(a: WeightMatrix, tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER) -> ScalingResult:
    """Alternate row and column normalisation until all sums are within tol of 1.

    Raises :class:`NotConverged` after ``max_iter`` sweeps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    entries = np.asarray(getattr(a, "entries", a), dtype=np.float64)
    if np.any(entries <= 0):
        raise InvariantError("scaling needs a strictly positive matrix")
    log_a = np.log(entries)
    n = log_a.shape[0]
    lx = np.zeros(n)
    ly = np.zeros(n)
    d = entries.copy()
    res = _residual(d)
    it = 0
    while res > tol:
        if it >= max_iter:
            raise NotConverged(res, it)
        lx = -logsumexp(log_a + ly[None, :], axis=1)
        ly = -logsumexp(log_a + lx[:, None], axis=0)
        d = np.exp(lx[:, None] + log_a + ly[None, :])
        res = _residual(d)
        it += 1
    return ScalingResult(lx, ly, d, float(res), it)


def _log_van_der_waerden(n: int) -> float:
    return float(gammaln(n + 1) - n * math.log(n))


def scaled_permanent_bounds(d: np.ndarray) -> tuple[float, float]:
    """Certified (log lower, log upper) for per D, D nearly doubly stochastic.

    Upper: per D <= min(prod of row sums, prod of column sums).
    Lower: let c be the column sums, D' = D diag(1/c) and e = row sums of
    D' minus 1. Then S = D' - e 1^T / n is exactly doubly stochastic when
    nonnegative. Rows with a deficit
    (e_i < 0) satisfy d'_ij >= (1 - theta) s_ij for
    theta = max_i max(-e_i, 0) / (n min s), the others d'_ij >= s_ij, so
    per D >= prod(c) (1 - theta)^n n!/n^n by van der Waerden. A margin of a
    few ulps per entry covers rounding in forming D.
    """
    n = d.shape[0]
    rows = d.sum(axis=1)
    cols = d.sum(axis=0)
    slack = 8 * n * _EPS
    log_upper = min(np.log(rows).sum(), np.log(cols).sum()) + n * math.log1p(slack)

    # fold the column error into a column rescaling first
    d_cols = d / cols[None, :]
    e = d_cols.sum(axis=1) - 1.0
    s = d_cols - e[:, None] / n
    s_min = s.min()
    if s_min <= 0:
        return -math.inf, float(log_upper)
    theta = max(float(np.maximum(-e, 0).max()) / (n * s_min), 0.0) + slack
    if theta >= 1:
        return -math.inf, float(log_upper)
    log_lower = (
        _log_van_der_waerden(n)
        + n * math.log1p(-theta)
        + float(np.log(cols).sum())
    )
    return float(log_lower), float(log_upper)


def permanent_bracket(a: WeightMatrix, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER,
                      check_exact: bool = True) -> PartitionReport:
    """Bracket per A via scaling: per A = per D / (prod x * prod y).

    ``value`` is the geometric midpoint of the bracket. When ``check_exact``
    and n is within the exact-permanent cap, Ryser's value is attached so
    the width (``log_ratio``) can be inspected.
    """
    n = a.n if hasattr(a, "n") else np.asarray(a).shape[0]
    if n == 1:
        v = LogValue.from_float(float(np.asarray(getattr(a, "entries", a))[0, 0]))
        return PartitionReport(v, v, v, "scaling-bracket", exact=v if check_exact else None,
                               residual=0.0)
    sc = sinkhorn_scale(a, tol=tol, max_iter=max_iter)
    lo_d, hi_d = scaled_permanent_bounds(sc.scaled)
    shift = -(sc.log_row.sum() + sc.log_col.sum())
    lower = LogValue.from_log(lo_d + shift)
    upper = LogValue.from_log(hi_d + shift)
    mid = LogValue.from_log(0.5 * (lo_d + hi_d) + shift) if math.isfinite(lo_d) else lower
    if mid < lower:
        mid = lower
    exact = None
    if check_exact and n <= caps().exact_per:
        exact = permanent_ryser(a)
    return PartitionReport(mid, lower, upper, "scaling-bracket", sc.iterations, exact,
                           sc.residual)


def permanent_report(a: WeightMatrix, tol: float = DEFAULT_TOL) -> PartitionReport:
    """Exact Ryser report when feasible, scaling bracket otherwise."""
    if a.n <= caps().exact_per:
        return _exact_report(permanent_ryser(a), "exact-oracle")
    return permanent_bracket(a, tol=tol, check_exact=False)


def trace_report(a, k: int | None = None) -> PartitionReport:
    k = a.n if k is None else k
    return _exact_report(trace_power(a, k), "trace-power")


def spanning_tree_report(a: SymmetricWeightMatrix) -> PartitionReport:
    return _exact_report(spanning_tree_pf(a), "matrix-tree")
