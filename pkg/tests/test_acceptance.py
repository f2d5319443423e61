"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one ``CRITERION k: PASS|FAIL`` line (shown with ``-s``, and
collected into the terminal summary). Run alone with

    pytest tests/test_acceptance.py -s
"""

import math
import time

import numpy as np
import pytest

from densepf import concentration as C
from densepf.core import (DirectedGraph, make_symmetric_matrix, perturb, random_graph,
                          random_symmetric_matrix, random_weight_matrix)
from densepf.errors import NotApplicable
from densepf.kernels import ham_dp
from densepf.oracles import (all_spanning_trees, all_walks, hamiltonian_permanent,
                             permanent_naive, permanent_ryser, permutation_profile,
                             tree_profile, walk_profile)
from densepf.scalable import permanent_bracket, sinkhorn_scale, spanning_tree_pf, trace_power
from densepf.separator import SeparationInstance, Verdict, ham_exact_verdict, separate, thresholds
from densepf.verify import DEFAULT_SEED, random_points
from tests.conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance

DELTAS = (0.2, 0.5, 1.0)
REL = 1e-9


def _rng(k):
    return np.random.default_rng(DEFAULT_SEED + k)


def _rel(x, y):
    return abs(x - y) / max(abs(y), 1e-300)


def _report(k, ok, detail):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_ryser_equals_naive():
    rng = _rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for n in range(2, 11):
        for delta in DELTAS:
            for _ in range(50):
                a = random_weight_matrix(n, delta, rng)
                worst = max(worst, _rel(permanent_ryser(a).value, permanent_naive(a).value))
                count += 1
    elapsed = time.perf_counter() - t0
    _report(1, worst <= REL and elapsed < 120,
            f"{count} matrices, worst rel err {worst:.2e} (tol 1e-9), {elapsed:.1f}s (limit 120s)")


def test_criterion_02_ham_dp_equals_naive():
    rng = _rng(2)
    worst = 0.0
    special = True
    for n in range(2, 11):
        for delta in DELTAS:
            for _ in range(10):
                a = random_weight_matrix(n, delta, rng)
                worst = max(worst, _rel(hamiltonian_permanent(a, "dp").value,
                                        hamiltonian_permanent(a, "naive").value))
        ones = np.ones((n, n))
        # raw DP float: integer arithmetic below 2^53 is exact
        special &= ham_dp(ones) == math.factorial(n - 1)
        # two disjoint cliques: cycle covers exist, Hamiltonian cycles do not
        split = np.zeros((n, n))
        h = n // 2
        split[:h, :h] = 1
        split[h:, h:] = 1
        special &= hamiltonian_permanent(split, "dp").sign == 0
    _report(2, worst <= REL and special,
            f"worst rel err {worst:.2e}; all-ones = (n-1)! and split graph = 0: {special}")


def test_criterion_03_matrix_tree_equals_prufer():
    rng = _rng(3)
    worst = 0.0
    cayley = True
    for n in range(2, 10):
        for delta in DELTAS:
            for _ in range(5):
                s = random_symmetric_matrix(n, delta, rng)
                worst = max(worst, _rel(spanning_tree_pf(s).value, tree_profile(s).total))
        if n <= 6:
            # literal enumeration of trees as well, independent of the kernels
            s = random_symmetric_matrix(n, 0.3, rng)
            brute = sum(t.weight(s) for t in all_spanning_trees(n))
            worst = max(worst, _rel(spanning_tree_pf(s).value, brute))
        v = spanning_tree_pf(make_symmetric_matrix(np.ones((n, n)), 1.0)).value
        cayley &= round(v) == n ** (n - 2) and _rel(v, n ** (n - 2)) < 1e-12
    _report(3, worst <= REL and cayley,
            f"worst rel err {worst:.2e}; all-ones gives n^(n-2): {cayley}")


def test_criterion_04_trace_equals_walks():
    rng = _rng(4)
    worst = 0.0
    ones_ok = True
    for n in range(2, 8):
        for delta in DELTAS:
            for _ in range(5):
                a = random_weight_matrix(n, delta, rng)
                worst = max(worst, _rel(trace_power(a, n).value, walk_profile(a).total))
        if n <= 5:
            a = random_weight_matrix(n, 0.3, rng)
            brute = sum(w.weight(a) for w in all_walks(n))
            worst = max(worst, _rel(trace_power(a, n).value, brute))
        ones_ok &= round(trace_power(np.ones((n, n)), n).value) == n ** n
    _report(4, worst <= REL and ones_ok, f"worst rel err {worst:.2e}; all-ones gives n^n: {ones_ok}")


def test_criterion_05_low_cycle_half():
    rng = _rng(5)
    bad = total = vac = 0
    for n in range(2, 11):
        for delta in DELTAS:
            for _ in range(50):
                row = C.theorem13_check(random_weight_matrix(n, delta, rng))
                total += 1
                bad += not row.satisfied
                vac += row.vacuous
    _report(5, bad == 0, f"{total - bad}/{total} satisfied, {bad} violations ({vac} vacuous)")


def test_criterion_06_cycle_length_and_count():
    rng = _rng(6)
    bad21 = bad22 = total = 0
    worst = 0.0
    for n in range(2, 9):
        for delta in DELTAS:
            for _ in range(20):
                a = random_weight_matrix(n, delta, rng)
                prof = permutation_profile(a)
                r21 = C.lemma21_check(a, prof)
                r22 = C.lemma22_check(a, prof)
                total += 1
                bad21 += not r21.satisfied
                bad22 += not r22.satisfied
                worst = max(worst, r21.lhs / r21.rhs)
    _report(6, bad21 == 0 and bad22 == 0,
            f"{total} instances; cycle-length violations {bad21} (worst ratio {worst:.3f}), "
            f"mean-cycle-count violations {bad22}")


def test_criterion_07_certified_factor():
    from densepf.separator import theorem12_lower_factor
    rng = _rng(7)
    bad_lo = bad_hi = total = 0
    for n in range(2, 10):
        for delta in (0.2, 0.5, 0.9):
            log_c = theorem12_lower_factor(n, delta)
            for _ in range(20):
                a = random_weight_matrix(n, delta, rng)
                ham = hamiltonian_permanent(a, "dp").log
                per = permanent_naive(a).log
                total += 1
                bad_lo += not ham >= log_c + per - 1e-9
                bad_hi += not ham <= per + 1e-9
    _report(7, bad_lo == 0 and bad_hi == 0,
            f"{total} instances; lower-factor violations {bad_lo}, ham > per violations {bad_hi}")


def _measures(rng):
    for n in range(2, 8):
        for delta in DELTAS:
            yield "walk", C.walk_measure(random_weight_matrix(n, delta, rng))
    for n in range(3, 10):
        for delta in DELTAS:
            yield "tree", C.tree_measure(random_symmetric_matrix(n, delta, rng))


def test_criterion_08_measure_machinery():
    rng = _rng(8)
    fails = {"lipschitz": 0, "derivative": 0, "moment": 0, "tail": 0, "coordinate": 0}
    measures = tails = 0
    for kind, mu in _measures(rng):
        measures += 1
        fails["lipschitz"] += C.lipschitz_ratio(mu) > 1 + 1e-9
        fails["derivative"] += not C.lemma31_check(mu, random_points(mu.n, 100, rng)).satisfied
        fails["moment"] += not C.lemma32_check(mu, C.lemma32_grid(mu.n)).satisfied
        if mu.m >= mu.delta * mu.n and mu.n >= 3:
            t = C.tail_bound_check(mu)
            tails += 1
            fails["tail"] += not t.satisfied
            fails["coordinate"] += not t.coordinate_satisfied
    ok = not any(fails.values())
    _report(8, ok, f"{measures} measures ({tails} meet m >= delta n); failures {fails}")


def test_criterion_09_walk_and_tree_theorems():
    rng = _rng(9)
    bad = total = vac = 0
    for n in range(3, 8):
        for delta in DELTAS:
            for _ in range(5):
                row = C.theorem15_check(random_weight_matrix(n, delta, rng))
                total += 1
                bad += not row.satisfied
                vac += row.vacuous
    for n in range(3, 10):
        for delta in (0.2, 0.5, 0.7):
            for _ in range(5):
                try:
                    row = C.theorem17_check(random_symmetric_matrix(n, delta, rng))
                except NotApplicable:
                    continue
                total += 1
                bad += not row.satisfied
                vac += row.vacuous
    moves_bad = 0
    for n in range(2, 6):
        moves_bad += sum(c != e for c, e in C.walk_preimage_counts(n))
        if n >= 3:
            moves_bad += sum(c != e for c, e in C.tree_preimage_counts(n))
        for delta in DELTAS:
            mu = C.walk_measure(random_weight_matrix(n, delta, rng))
            moves_bad += C.move_inequality_ratio(mu, 0, 1, delta ** 2) > 1 + 1e-9
            if n >= 3:
                mu = C.tree_measure(random_symmetric_matrix(n, delta, rng))
                moves_bad += C.move_inequality_ratio(mu, 0, 1, delta) > 1 + 1e-9
    _report(9, bad == 0 and moves_bad == 0,
            f"{total - bad}/{total} assembled checks hold ({vac} vacuous); "
            f"move-inequality failures {moves_bad}")


def test_criterion_10_scaling():
    rng = _rng(10)
    worst_res = 0.0
    max_iter = 0
    for _ in range(100):
        n = int(rng.integers(2, 51))
        delta = float(rng.choice([0.05, 0.2, 0.5, 1.0]))
        sc = sinkhorn_scale(random_weight_matrix(n, delta, rng), tol=1e-8, max_iter=10_000)
        worst_res = max(worst_res, sc.residual)
        max_iter = max(max_iter, sc.iterations)
    missed = 0
    ratios = {}
    for n in range(2, 21):
        for delta in DELTAS:
            rep = permanent_bracket(random_weight_matrix(n, delta, rng))
            missed += not rep.contains(rep.exact)
            ratios[n] = max(ratios.get(n, 0.0), rep.log_ratio)
    shown = ", ".join(f"n={n}: {ratios[n]:.2f}" for n in (5, 10, 15, 20))
    print(f"  max log(upper/exact) by n: {shown}")
    _report(10, worst_res <= 1e-8 and missed == 0,
            f"worst residual {worst_res:.1e} (max {max_iter} iterations); "
            f"bracket misses {missed}/57; log(upper/exact) {shown}")


def test_criterion_11_separator():
    t0 = time.perf_counter()
    extremes = True
    for n in range(5, 13):
        extremes &= separate(SeparationInstance(DirectedGraph.complete(n), 0.5, 0.5)).verdict is Verdict.MANY
        extremes &= separate(SeparationInstance(DirectedGraph.empty(n), 0.5, 0.5)).verdict is Verdict.FAR
    rng = _rng(11)
    false_certs = decided = 0
    for _ in range(100):
        n = int(rng.integers(3, 13))
        g = random_graph(n, float(rng.uniform(0, 1)), rng)
        inst = SeparationInstance(g, 0.5, 0.5)
        truth = ham_exact_verdict(inst)
        log_many, log_far = thresholds(n, 0.5, 0.5, inst.delta)
        ham_a = hamiltonian_permanent(g.adjacency()).log
        ham_b = hamiltonian_permanent(perturb(g, inst.delta)).log
        for method in ("auto", "certified-bracket"):
            v = separate(inst, method).verdict
            decided += v is not Verdict.INCONCLUSIVE
            if v is Verdict.MANY and (ham_b <= log_far or truth.verdict is Verdict.FAR):
                false_certs += 1
            if v is Verdict.FAR and (ham_a >= log_many or truth.verdict is Verdict.MANY):
                false_certs += 1
    elapsed = time.perf_counter() - t0
    _report(11, extremes and false_certs == 0,
            f"K_n/empty n=5..12 correct: {extremes}; false certificates {false_certs}/200 "
            f"({decided} decided); {elapsed:.1f}s")
