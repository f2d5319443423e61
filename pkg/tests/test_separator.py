import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from densepf import separator as S
from densepf.core import DirectedGraph, perturb, random_graph
from densepf.errors import BadDelta, NotConverged, TooLarge
from densepf.oracles import hamiltonian_permanent


def _inst(g, eps=0.5, gamma=0.5, delta=None):
    return S.SeparationInstance(g, eps, gamma, delta)


class TestLowerFactor:
    def test_formula(self):
        n, d = 10, 0.5
        cap = 4 + 4 * math.log(n) / d ** 2
        expected = cap * math.log(d) - math.log(sum(math.comb(n, r) for r in range(11))) - math.log(2)
        assert S.theorem12_lower_factor(n, d) == pytest.approx(expected)

    def test_monotone_on_grid(self):
        deltas = [0.1 * k for k in range(1, 10)]
        grid = np.array([[S.theorem12_lower_factor(n, d) for d in deltas] for n in range(5, 101)])
        assert np.all(np.diff(grid, axis=0) <= 1e-12)
        assert np.all(np.diff(grid, axis=1) > 0)

    def test_theorem_shape(self):
        # log c >= -g (ln n)(ln delta n) for one finite g over the grid
        ratios = []
        for n in range(5, 101):
            for d in (0.1 * k for k in range(1, 10)):
                if d * n > math.e:
                    ratios.append(-S.theorem12_lower_factor(n, d) / (math.log(n) * math.log(d * n)))
        assert 0 < max(ratios) < math.inf

    @pytest.mark.parametrize("n,d", [(1, 0.5), (5, 1.0), (5, 0.0)])
    def test_domain(self, n, d):
        with pytest.raises((ValueError, BadDelta)):
            S.theorem12_lower_factor(n, d)


class TestInstance:
    def test_default_delta(self):
        inst = _inst(DirectedGraph.empty(4), 0.5, 0.5)
        assert inst.delta == pytest.approx(0.125)

    def test_delta_must_be_below_supremum(self):
        with pytest.raises(BadDelta):
            _inst(DirectedGraph.empty(4), 0.5, 0.5, 0.25)

    def test_thresholds(self):
        many, far = S.thresholds(8, 0.5, 0.5, 0.125)
        assert many == pytest.approx(8 * math.log(0.5) + math.log(5040))
        assert far == pytest.approx(4 * math.log(0.125) + math.log(5040))


class TestSeparate:
    @pytest.mark.parametrize("n", [5, 8, 12])
    @pytest.mark.parametrize("method", ["auto", "exact-ham"])
    def test_complete_graph(self, n, method):
        assert S.separate(_inst(DirectedGraph.complete(n)), method).verdict is S.Verdict.MANY

    @pytest.mark.parametrize("n", [5, 10, 12])
    @pytest.mark.parametrize("method", ["auto", "certified-bracket"])
    def test_empty_graph(self, n, method):
        assert S.separate(_inst(DirectedGraph.empty(n)), method).verdict is S.Verdict.FAR

    def test_certified_path_is_honest_about_weak_factor(self):
        res = S.separate(_inst(DirectedGraph.complete(8)), "certified-bracket")
        assert res.verdict is S.Verdict.INCONCLUSIVE
        assert res.bounds.log_ham_lower < res.bounds.log_threshold_far

    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_single_cycle_never_false(self, n):
        inst = _inst(DirectedGraph.cycle(n))
        res = S.separate(inst)
        truth = S.ham_exact_verdict(inst)
        assert res.verdict in (truth.verdict, S.Verdict.INCONCLUSIVE)

    def test_bounds_invariant(self):
        b = S.separate(_inst(DirectedGraph.complete(6)), "certified-bracket").bounds
        assert b.log_ham_lower == pytest.approx(
            b.log_per_lower + b.patch_loss - b.patch_multiplicity - math.log(2))

    @given(st.integers(3, 9), st.floats(0.0, 1.0), st.integers(0, 2**32),
           st.sampled_from(["auto", "certified-bracket"]))
    def test_soundness_and_sandwich(self, n, p, seed, method):
        g = random_graph(n, p, np.random.default_rng(seed))
        inst = _inst(g)
        res = S.separate(inst, method)
        b = res.bounds
        ham_b = hamiltonian_permanent(perturb(g, inst.delta)).log
        ham_a = hamiltonian_permanent(g.adjacency()).log
        assert b.log_ham_lower <= ham_b + 1e-9
        assert ham_b <= b.log_per_upper + 1e-9
        if res.verdict is S.Verdict.MANY:
            assert ham_b > b.log_threshold_far
        if res.verdict is S.Verdict.FAR:
            assert ham_a < b.log_threshold_many

    def test_deterministic(self, rng):
        inst = _inst(random_graph(9, 0.6, rng))
        assert S.separate(inst).to_json() == S.separate(inst).to_json()

    def test_not_converged_becomes_inconclusive(self, monkeypatch):
        monkeypatch.setenv("DENSEPF_CAP_EXACT_PER", "3")

        def boom(*a, **k):
            raise NotConverged(1.0, 5)

        monkeypatch.setattr(S, "permanent_bracket", boom)
        res = S.separate(_inst(DirectedGraph.complete(6)), "certified-bracket")
        assert res.verdict is S.Verdict.INCONCLUSIVE
        assert "did not converge" in res.diagnostic

    def test_json_fields(self):
        out = S.separate(_inst(DirectedGraph.complete(5))).to_json()
        assert set(out) >= {"verdict", "log_bounds", "thresholds", "delta_used", "method"}
        assert out["verdict"] == "ManyHamiltonian"

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            S.separate(_inst(DirectedGraph.complete(5)), "guess")


class TestAlternatives:
    @pytest.mark.parametrize("n", [5, 7, 9])
    def test_planted_many(self, n, rng):
        # K_n minus a few arcs still has >= eps^n (n-1)! Hamiltonian cycles
        adj = 1 - np.eye(n)
        adj[rng.integers(0, n, 3), rng.integers(0, n, 3)] = 0
        np.fill_diagonal(adj, 0)
        g = DirectedGraph.from_adjacency(adj)
        inst = _inst(g)
        many, _ = S.thresholds(n, 0.5, 0.5, inst.delta)
        assert hamiltonian_permanent(g.adjacency()).log >= many
        assert hamiltonian_permanent(perturb(g, inst.delta)).log >= many
        assert S.separate(inst).verdict is S.Verdict.MANY

    @pytest.mark.parametrize("n,k", [(6, 2), (8, 3), (9, 4)])
    def test_deleted_neighbourhoods_far(self, n, k):
        # isolate k vertices: every Hamiltonian cycle of K_n uses >= k non-edges
        adj = 1 - np.eye(n)
        adj[:k, :] = 0
        adj[:, :k] = 0
        g = DirectedGraph.from_adjacency(adj)
        gamma = k / n
        inst = _inst(g, 0.5, gamma)
        _, far = S.thresholds(n, 0.5, gamma, inst.delta)
        assert hamiltonian_permanent(perturb(g, inst.delta)).log <= far + 1e-9
        assert S.ham_exact_verdict(inst).verdict is S.Verdict.FAR


class TestExactVerdict:
    def test_complete(self):
        assert S.ham_exact_verdict(_inst(DirectedGraph.complete(8))).verdict is S.Verdict.MANY

    def test_empty(self):
        assert S.ham_exact_verdict(_inst(DirectedGraph.empty(8))).verdict is S.Verdict.FAR

    def test_too_large(self, monkeypatch):
        monkeypatch.setenv("DENSEPF_CAP_HAM_DP", "5")
        with pytest.raises(TooLarge):
            S.ham_exact_verdict(_inst(DirectedGraph.empty(6)))
