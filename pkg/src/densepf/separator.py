"""Separate graphs with many Hamiltonian cycles from graphs far from Hamiltonian.

Given a digraph G on n vertices and constants 0 < eps, gamma < 1, the two
alternatives are

    many:  G has at least eps^n (n-1)! Hamiltonian cycles,
    far:   every Hamiltonian cycle of K_n uses at least gamma*n non-edges.

With B = perturb(G, delta) and delta < eps^(1/gamma), "many" forces
ham B >= eps^n (n-1)! and "far" forces ham B <= delta^(gamma n) (n-1)!. So a
certified interval on ham B decides the instance whenever it clears one of
the two thresholds. All comparisons are done on natural logs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

from .config import caps
from .core import DirectedGraph, perturb
from .errors import BadDelta, NotConverged, TooLarge
from .kernels import ham_dp
from .oracles import permanent_ryser
from .scalable import permanent_bracket

LOG_MARGIN = 1e-9
# Allowance on log per B when it comes from Ryser. The kernel works in
# double-double and is accurate to a few ulps on every instance we have
# checked, but no useful a priori bound exists when the cancellation is
# extreme (tiny delta), so keep a margin far above the observed error.
RYSER_LOG_SLACK = 1e-3


class Verdict(str, Enum):
    MANY = "ManyHamiltonian"
    FAR = "FarFromHamiltonian"
    INCONCLUSIVE = "Inconclusive"


def _log_binomial_prefix(n: int, rmax: int) -> float:
    """log sum_{r=0}^{rmax} C(n, r), summed exactly in integers."""
    return math.log(sum(math.comb(n, r) for r in range(min(rmax, n) + 1)))


def theorem12_lower_factor(n: int, delta: float) -> float:
    """log c(n, delta) with ham A >= c(n, delta) per A for every n x n matrix
    with entries in [delta, 1].

    Half of per A sits on permutations with at most K = 4 + 4 ln n / delta^2
    cycles; patching such a permutation into one cycle loses at most a factor
    delta^K, and each Hamiltonian cycle is hit by at most sum_{r <= K} C(n, r)
    of them.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < delta < 1:
        raise BadDelta(delta, "(0, 1)")
    cap = 4.0 + 4.0 * math.log(n) / delta ** 2
    return cap * math.log(delta) - _log_binomial_prefix(n, math.floor(cap)) - math.log(2.0)


@dataclass(frozen=True)
class SeparationInstance:
    graph: DirectedGraph
    epsilon: float
    gamma: float
    delta: float | None = None

    def __post_init__(self):
        for name in ("epsilon", "gamma"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")
        sup = self.epsilon ** (1.0 / self.gamma)
        delta = sup / 2 if self.delta is None else float(self.delta)
        if not 0 < delta < sup:
            raise BadDelta(delta, f"(0, eps^(1/gamma)) = (0, {sup:g})")
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class CertifiedBounds:
    log_per_lower: float
    log_per_upper: float
    log_ham_lower: float
    log_ham_upper: float
    log_threshold_many: float
    log_threshold_far: float
    cycle_cap: float
    patch_loss: float
    patch_multiplicity: float
    log_ham_exact: float | None = None

    @property
    def decision_interval(self) -> tuple[float, float]:
        if self.log_ham_exact is not None:
            return self.log_ham_exact, self.log_ham_exact
        return self.log_ham_lower, self.log_ham_upper


@dataclass(frozen=True)
class SeparationVerdict:
    verdict: Verdict
    bounds: CertifiedBounds
    method: str
    delta_used: float
    diagnostic: str | None = None

    def to_json(self) -> dict:
        b = asdict(self.bounds)
        thresholds = {
            "log_many": b.pop("log_threshold_many"),
            "log_far": b.pop("log_threshold_far"),
        }
        out = {
            "verdict": self.verdict.value,
            "log_bounds": b,
            "thresholds": thresholds,
            "delta_used": self.delta_used,
            "method": self.method,
        }
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def thresholds(n: int, epsilon: float, gamma: float, delta: float) -> tuple[float, float]:
    """(log eps^n (n-1)!, log delta^(gamma n) (n-1)!)."""
    lf = math.lgamma(n)
    return n * math.log(epsilon) + lf, gamma * n * math.log(delta) + lf


def _decide(lo: float, hi: float, log_many: float, log_far: float) -> Verdict:
    not_far = lo > log_far + LOG_MARGIN
    not_many = hi < log_many - LOG_MARGIN
    if not_far and not not_many:
        return Verdict.MANY
    if not_many and not not_far:
        return Verdict.FAR
    return Verdict.INCONCLUSIVE


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def separate(instance: SeparationInstance, method: str = "auto",
             tol: float = 1e-8) -> SeparationVerdict:
    """Decide the instance from certified bounds on ham B.

    ``method="certified-bracket"`` uses only per B (exact by Ryser up to the
    exact-permanent cap, a scaling bracket beyond) together with
    ham <= per and :func:`theorem12_lower_factor`. ``method="exact-ham"``
    evaluates ham B by dynamic programming. ``"auto"`` picks exact-ham when n
    is within the DP cap.
    """
    n, delta = instance.n, instance.delta
    if method == "auto":
        method = "exact-ham" if n <= caps().ham_dp else "certified-bracket"
    if method not in ("exact-ham", "certified-bracket"):
        raise ValueError(f"unknown method {method!r}")
    b = perturb(instance.graph, delta)
    log_many, log_far = thresholds(n, instance.epsilon, instance.gamma, delta)
    cap = 4.0 + 4.0 * math.log(n) / delta ** 2 if n >= 2 else 0.0
    loss = cap * math.log(delta)
    mult = _log_binomial_prefix(n, math.floor(cap)) if n >= 2 else 0.0

    diagnostic = None
    try:
        if n <= caps().exact_per:
            log_per = permanent_ryser(b).log
            lo, hi = log_per - RYSER_LOG_SLACK, log_per + RYSER_LOG_SLACK
        else:
            rep = permanent_bracket(b, tol=tol, check_exact=False)
            lo, hi = rep.lower.log, rep.upper.log
    except NotConverged as exc:
        lo, hi = -math.inf, math.inf
        diagnostic = str(exc)
    ham_lower = lo + theorem12_lower_factor(n, delta) if n >= 2 else lo
    exact = _safe_log(ham_dp(b.entries)) if method == "exact-ham" else None
    bounds = CertifiedBounds(lo, hi, ham_lower, hi, log_many, log_far, cap, loss, mult, exact)
    verdict = _decide(*bounds.decision_interval, log_many, log_far)
    return SeparationVerdict(verdict, bounds, method, delta, diagnostic)


def ham_exact_verdict(instance: SeparationInstance) -> SeparationVerdict:
    """Ground truth: "many" tested on ham A directly, "far" through ham B."""
    n, delta = instance.n, instance.delta
    if n > caps().ham_dp:
        raise TooLarge(n, caps().ham_dp, "ham_exact_verdict")
    b = perturb(instance.graph, delta)
    log_many, log_far = thresholds(n, instance.epsilon, instance.gamma, delta)
    log_ham_a = _safe_log(ham_dp(instance.graph.adjacency()))
    log_ham_b = _safe_log(ham_dp(b.entries))
    if log_ham_a >= log_many - 1e-12:
        verdict = Verdict.MANY
    elif log_ham_b <= log_far + 1e-12:
        verdict = Verdict.FAR
    else:
        verdict = Verdict.INCONCLUSIVE
    cap = 4.0 + 4.0 * math.log(n) / delta ** 2 if n >= 2 else 0.0
    log_per = permanent_ryser(b).log
    bounds = CertifiedBounds(
        log_per_lower=log_per, log_per_upper=log_per,
        log_ham_lower=log_ham_b, log_ham_upper=log_ham_b,
        log_threshold_many=log_many, log_threshold_far=log_far,
        cycle_cap=cap, patch_loss=cap * math.log(delta),
        patch_multiplicity=_log_binomial_prefix(n, math.floor(cap)) if n >= 2 else 0.0,
        log_ham_exact=log_ham_b,
    )
    return SeparationVerdict(verdict, bounds, "exact-ham", delta,
                             f"log ham A = {log_ham_a!r}")
