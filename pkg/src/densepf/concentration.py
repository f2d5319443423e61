"""Degree-profile measures on compositions and the checks built on them.

A :class:`CompositionMeasure` is a probability measure on the compositions
of m into n parts, stored exhaustively in rank order. Walks of length n give
one on compositions of n (arrival counts), spanning trees one on
compositions of n - 2 (degree minus one). The checks here evaluate, exactly,
the exponential-moment and tail inequalities those measures satisfy, the
local moves that prove the Lipschitz property, and the assembled low-cycle,
low-degree-walk and low-degree-tree inequalities.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import gammaln

from . import kernels
from .errors import (HypothesisViolated, InvariantError, NotAnEdge, NotApplicable,
                     OnPath, WrongVertexAtPosition)
from .oracles import (ClosedWalk, CompositionProfile, PermutationProfile, SpanningTree,
                      all_spanning_trees, all_walks, permutation_profile, tree_profile,
                      walk_profile)
from .scalable import spanning_tree_pf, trace_power

REL_TOL = 1e-9


# ---------------------------------------------------------------------------
# thresholds


def _loglog(n: int) -> float:
    if n < 3:
        raise NotApplicable(f"ln ln n is not positive for n={n}; need n >= 3")
    return math.log(math.log(n))


def cycle_cap(n: int, delta: float) -> float:
    """4 + 4 ln n / delta^2."""
    return 4.0 + 4.0 * math.log(n) / delta ** 2


def walk_degree_threshold(n: int, delta: float) -> float:
    """3 ln n / (delta^2 ln ln n)."""
    return 3.0 * math.log(n) / (delta ** 2 * _loglog(n))


def tree_degree_threshold(n: int, delta: float) -> float:
    """1 + 3 ln n / (delta ln ln n)."""
    return 1.0 + 3.0 * math.log(n) / (delta * _loglog(n))


def tail_threshold(m: int, n: int, delta: float) -> float:
    """3 m ln n / (delta n ln ln n)."""
    return 3.0 * m * math.log(n) / (delta * n * _loglog(n))


def _floor(x: float) -> int:
    # a real threshold bounds an integer degree through its floor
    return math.floor(x + 1e-12)


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True, eq=False)
class CompositionMeasure:
    """P on compositions of m into n parts; ``delta`` is the Lipschitz constant
    promised for w(a) = alpha_1! ... alpha_n! P(a)."""

    m: int
    n: int
    parts: np.ndarray
    probs: np.ndarray
    delta: float

    def __post_init__(self):
        expected = kernels.compositions(self.m, self.n)
        if self.parts.shape != expected.shape or not np.array_equal(self.parts, expected):
            raise InvariantError("measure support must be all compositions in rank order")
        if abs(self.probs.sum() - 1.0) > 1e-9 or np.any(self.probs < 0):
            raise InvariantError("probabilities must be nonnegative and sum to 1")

    @classmethod
    def from_masses(cls, m: int, n: int, masses, delta: float) -> CompositionMeasure:
        masses = np.asarray(masses, dtype=np.float64)
        return cls(m, n, kernels.compositions(m, n), masses / masses.sum(), delta)

    @classmethod
    def from_weights(cls, m: int, n: int, w, delta: float) -> CompositionMeasure:
        """Measure with P(a) proportional to w(a) / (alpha_1! ... alpha_n!)."""
        parts = kernels.compositions(m, n)
        log_fact = gammaln(parts + 1).sum(axis=1)
        p = np.asarray(w, dtype=np.float64) * np.exp(-log_fact)
        return cls.from_masses(m, n, p, delta)

    @property
    def weights(self) -> np.ndarray:
        return self.probs * np.exp(gammaln(self.parts + 1).sum(axis=1))

    def prob(self, alpha) -> float:
        r = kernels.rank_rows(np.asarray([alpha]), self.m)[0]
        return float(self.probs[r])


def walk_measure(a, profile: CompositionProfile | None = None) -> CompositionMeasure:
    """Arrival-count profile of a random closed walk, P(pi) ~ weight(pi).

    Lipschitz constant delta^2.
    """
    profile = profile or walk_profile(a)
    n = profile.parts.shape[1]
    return CompositionMeasure.from_masses(n, n, profile.masses, a.delta ** 2)


def tree_measure(a, profile: CompositionProfile | None = None) -> CompositionMeasure:
    """Degree-minus-one profile of a random spanning tree, P(tau) ~ weight(tau).

    Lipschitz constant delta.
    """
    profile = profile or tree_profile(a)
    n = profile.parts.shape[1]
    return CompositionMeasure.from_masses(n - 2, n, profile.masses, a.delta)


def random_lipschitz_measure(m: int, n: int, delta: float,
                             rng: np.random.Generator) -> CompositionMeasure:
    """w(a) = prod_i h_i(alpha_i) with every ratio h_i(k+1)/h_i(k) drawn in
    [delta^(1/2), delta^(-1/2)], so any unit move changes w by at most 1/delta."""
    half = 0.5 * math.log(1.0 / delta)
    steps = rng.uniform(-half, half, size=(n, m))
    log_h = np.concatenate([np.zeros((n, 1)), np.cumsum(steps, axis=1)], axis=1)
    parts = kernels.compositions(m, n)
    log_w = log_h[np.arange(n), parts].sum(axis=1)
    return CompositionMeasure.from_weights(m, n, np.exp(log_w - log_w.max()), delta)


def lipschitz_ratio(mu: CompositionMeasure) -> float:
    """max of delta * w(alpha) / w(beta) over all pairs at L1 distance 2.

    The Lipschitz hypothesis holds iff this is <= 1.
    """
    w = mu.weights
    worst = 0.0
    for i in range(mu.n):
        src = np.nonzero(mu.parts[:, i] > 0)[0]
        if len(src) == 0:
            continue
        for j in range(mu.n):
            if j == i:
                continue
            beta = mu.parts[src].copy()
            beta[:, i] -= 1
            beta[:, j] += 1
            wb = w[kernels.rank_rows(beta, mu.m)]
            wa = w[src]
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(wa == 0, 0.0, mu.delta * wa / wb)
            worst = max(worst, float(r.max()))
    return worst


def move_inequality_ratio(mu: CompositionMeasure, source: int, target: int,
                          const: float) -> float:
    """max over a with alpha_source > 0 of
    (alpha_target + 1) P(b) / (const^-1 alpha_source P(a)),
    b = a - e_source + e_target. The move inequality holds iff <= 1."""
    src = np.nonzero(mu.parts[:, source] > 0)[0]
    b = mu.parts[src].copy()
    b[:, source] -= 1
    b[:, target] += 1
    pb = mu.probs[kernels.rank_rows(b, mu.m)]
    lhs = (mu.parts[src, target] + 1) * pb
    rhs = mu.parts[src, source] * mu.probs[src] / const
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(lhs == 0, 0.0, lhs / rhs)
    return float(r.max()) if len(r) else 0.0


# ---------------------------------------------------------------------------
# generating polynomial


def generating_polynomial_eval(mu: CompositionMeasure, x) -> float:
    """f(x) = sum_a P(a) x_1^alpha_1 ... x_n^alpha_n."""
    x = np.asarray(x, dtype=np.float64)
    return float(mu.probs @ np.prod(x ** mu.parts, axis=1))


def partial_derivative_eval(mu: CompositionMeasure, i: int, x) -> float:
    """d f / d x_i at x."""
    x = np.asarray(x, dtype=np.float64)
    sel = mu.parts[:, i] > 0
    e = mu.parts[sel].copy()
    coef = e[:, i].astype(np.float64)
    e[:, i] -= 1
    return float((mu.probs[sel] * coef) @ np.prod(x ** e, axis=1))


def gradient_eval(mu: CompositionMeasure, x) -> np.ndarray:
    return np.array([partial_derivative_eval(mu, i, x) for i in range(mu.n)])


def derivative_ratio(mu: CompositionMeasure, x) -> float:
    """delta * max_i f_i(x) / min_j f_j(x); the derivative comparison holds iff <= 1."""
    g = gradient_eval(mu, x)
    if g.max() == 0:
        return 0.0
    if g.min() == 0:
        return math.inf
    return float(mu.delta * g.max() / g.min())


def moment_bound_check(mu: CompositionMeasure, t: float, i: int = 0) -> tuple[float, float]:
    """(E exp(t alpha_i), ((e^t + (n-1) delta) / (1 + (n-1) delta))^m)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x = np.ones(mu.n)
    x[i] = math.exp(t)
    lhs = generating_polynomial_eval(mu, x)
    nd = (mu.n - 1) * mu.delta
    rhs = ((math.exp(t) + nd) / (1.0 + nd)) ** mu.m
    return lhs, rhs


@dataclass(frozen=True)
class TailReport:
    threshold: float
    tail_prob: float
    bound: float
    satisfied: bool
    coordinate_tail: float
    coordinate_bound: float
    coordinate_satisfied: bool
    vacuous: bool


def tail_bound_check(mu: CompositionMeasure) -> TailReport:
    """Exact P(max_i alpha_i >= T) against 1/n, and max_i P(alpha_i >= T)
    against 1/n^2, where T = 3 m ln n / (delta n ln ln n)."""
    n, m = mu.n, mu.m
    if m < mu.delta * n:
        raise HypothesisViolated(f"m={m} < delta*n={mu.delta * n:g}")
    thr = tail_threshold(m, n, mu.delta)
    hit = mu.parts >= thr - 1e-12
    tail = float(mu.probs[hit.any(axis=1)].sum())
    coord = float(max(mu.probs[hit[:, i]].sum() for i in range(n)))
    return TailReport(
        threshold=thr,
        tail_prob=tail,
        bound=1.0 / n,
        satisfied=tail <= 1.0 / n,
        coordinate_tail=coord,
        coordinate_bound=1.0 / n ** 2,
        coordinate_satisfied=coord <= 1.0 / n ** 2,
        vacuous=thr > m,
    )


# ---------------------------------------------------------------------------
# local moves


def walk_rewire(walk: ClosedWalk, k: int, source: int, target: int) -> ClosedWalk:
    """Replace the visit to ``source`` at position k by a visit to ``target``."""
    if walk.vertices[k] != source:
        raise WrongVertexAtPosition(
            f"position {k} holds {walk.vertices[k]}, expected {source}"
        )
    vs = list(walk.vertices)
    vs[k] = target
    return ClosedWalk(tuple(vs), walk.n)


def tree_edge_swap(tree: SpanningTree, i: int, source: int, target: int) -> SpanningTree:
    """Move the leaf-side subtree hanging at ``i`` from ``source`` to ``target``."""
    e = (min(source, i), max(source, i))
    if e not in tree.edges:
        raise NotAnEdge(f"{{{source}, {i}}} is not an edge")
    if i in tree.path(source, target):
        raise OnPath(f"{i} lies on the {source}-{target} path")
    edges = (tree.edges - {e}) | {(min(target, i), max(target, i))}
    return SpanningTree(tree.n, frozenset(edges))


def walk_preimage_counts(n: int, source: int = 0, target: int = 1):
    """For every walk rho, the number of (pi, k) with walk_rewire(pi, k) == rho,
    paired with the target's arrival count in rho. Returns a list of pairs."""
    counts = {}
    for pi in all_walks(n):
        for k, v in enumerate(pi.vertices):
            if v == source:
                rho = walk_rewire(pi, k, source, target)
                counts[rho.vertices] = counts.get(rho.vertices, 0) + 1
    out = []
    for rho in all_walks(n):
        expected = rho.degrees[target]
        out.append((counts.get(rho.vertices, 0), expected))
    return out


def tree_preimage_counts(n: int, source: int = 0, target: int = 1):
    """Same as :func:`walk_preimage_counts` for tree edge swaps; ``expected``
    is deg_target(eta) - 1."""
    counts = {}
    for tau in all_spanning_trees(n):
        path = tau.path(source, target)
        for i in tau.neighbors(source):
            if i in path:
                continue
            eta = tree_edge_swap(tau, i, source, target)
            counts[eta.edges] = counts.get(eta.edges, 0) + 1
    out = []
    for eta in all_spanning_trees(n):
        out.append((counts.get(eta.edges, 0), eta.degrees[target] - 1))
    return out


# ---------------------------------------------------------------------------
# assembled checks


@dataclass(frozen=True)
class Verification:
    theorem: str
    n: int
    delta: float
    threshold: float | None
    lhs: float
    rhs: float
    satisfied: bool
    vacuous: bool

    def to_json(self) -> dict:
        return asdict(self)


def _geq(lhs: float, rhs: float) -> bool:
    return lhs >= rhs * (1 - REL_TOL)


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + REL_TOL)


def theorem13_check(a, profile: PermutationProfile | None = None) -> Verification:
    """Permutations with at most 4 + 4 ln n / delta^2 cycles carry half of per A."""
    profile = profile or permutation_profile(a)
    n = profile.n
    cap = cycle_cap(n, a.delta)
    k = _floor(cap)
    lhs = float(profile.by_cycles[: min(k, n) + 1].sum())
    rhs = 0.5 * profile.total
    return Verification("thm13", n, a.delta, cap, lhs, rhs, _geq(lhs, rhs), k >= n)


def lemma21_check(a, profile: PermutationProfile | None = None) -> Verification:
    """Worst pair (i, m < n) for P(l_i = m) <= 1 / (delta^2 (n - m)).

    ``threshold`` holds the cycle length m attaining the worst ratio.
    """
    profile = profile or permutation_profile(a)
    n = profile.n
    if n < 2:
        raise NotApplicable("needs n >= 2")
    probs = profile.length_mass[:, 1:n] / profile.total  # m = 1..n-1
    m = np.arange(1, n)
    bound = 1.0 / (a.delta ** 2 * (n - m))
    ratio = probs / bound[None, :]
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    lhs, rhs = float(probs[i, j]), float(bound[j])
    return Verification("lemma21", n, a.delta, float(m[j]), lhs, rhs, _leq(lhs, rhs), False)


def lemma22_check(a, profile: PermutationProfile | None = None) -> Verification:
    profile = profile or permutation_profile(a)
    n = profile.n
    lhs = float(np.arange(n + 1) @ profile.by_cycles / profile.total)
    rhs = 2.0 + 2.0 * math.log(n) / a.delta ** 2
    return Verification("lemma22", n, a.delta, None, lhs, rhs, _leq(lhs, rhs), False)


def theorem15_check(a, profile: CompositionProfile | None = None) -> Verification:
    """Walks with all arrival counts <= 3 ln n / (delta^2 ln ln n) carry a
    (1 - 1/n) share of trace A^n."""
    n = a.n
    thr = walk_degree_threshold(n, a.delta)
    profile = profile or walk_profile(a)
    lhs = profile.restricted(_floor(thr))
    rhs = (1 - 1 / n) * trace_power(a, n).value
    return Verification("thm15", n, a.delta, thr, lhs, rhs, _geq(lhs, rhs), _floor(thr) >= n)


def theorem17_check(a, profile: CompositionProfile | None = None) -> Verification:
    """Trees with all degrees <= 1 + 3 ln n / (delta ln ln n) carry a
    (1 - 1/n) share of spt A, for n >= 2 / (1 - delta)."""
    n = a.n
    if a.delta >= 1 or n < 2 / (1 - a.delta):
        raise NotApplicable(f"needs n >= 2/(1-delta); n={n}, delta={a.delta}")
    thr = tree_degree_threshold(n, a.delta)
    profile = profile or tree_profile(a)
    lhs = profile.restricted(_floor(thr) - 1)
    rhs = (1 - 1 / n) * spanning_tree_pf(a).value
    return Verification("thm17", n, a.delta, thr, lhs, rhs, _geq(lhs, rhs),
                        _floor(thr) >= n - 1)


def lemma31_check(mu: CompositionMeasure, points) -> Verification:
    worst = max(derivative_ratio(mu, x) for x in points)
    return Verification("lemma31", mu.n, mu.delta, None, worst, 1.0, _leq(worst, 1.0), False)


def lemma32_check(mu: CompositionMeasure, ts) -> Verification:
    """Worst F(t) / bound(t) over the grid and over every coordinate."""
    worst = 0.0
    worst_t = 0.0
    for t in ts:
        for i in range(mu.n):
            lhs, rhs = moment_bound_check(mu, t, i)
            if lhs / rhs > worst:
                worst, worst_t = lhs / rhs, t
    return Verification("lemma32", mu.n, mu.delta, worst_t, worst, 1.0, _leq(worst, 1.0), False)


def lemma32_grid(n: int) -> list:
    ts = [0.25 * k for k in range(13)]
    if n >= 3:
        ts.append(math.log(math.log(n)))
    return ts
