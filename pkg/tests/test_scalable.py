import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from densepf.core import LogValue, make_symmetric_matrix, random_symmetric_matrix, random_weight_matrix
from densepf.errors import InvariantError, NotConverged
from densepf.oracles import permanent_ryser, tree_profile, walk_profile
from densepf.scalable import (PartitionReport, laplacian, permanent_bracket, permanent_report,
                              scaled_permanent_bounds, sinkhorn_scale, spanning_tree_pf,
                              trace_power, trace_report)
from tests.conftest import fixed_matrix, fixed_symmetric


class TestTracePower:
    @pytest.mark.parametrize("n,num,den", [(4, 27677, 2048), (5, 3848275, 32768), (6, 27190639, 32768)])
    def test_frozen(self, n, num, den):
        assert trace_power(fixed_matrix(n), n).value == pytest.approx(num / den, rel=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3, 7, 16])
    def test_matches_matrix_power(self, k, rng):
        a = rng.uniform(0, 1, (5, 5))
        assert trace_power(a, k).value == pytest.approx(np.trace(np.linalg.matrix_power(a, k)), rel=1e-12)

    def test_huge_power_stays_finite_in_log(self):
        v = trace_power(np.ones((50, 50)), 400)
        assert v.log == pytest.approx(400 * math.log(50), rel=1e-12)

    def test_zero_matrix(self):
        assert trace_power(np.zeros((3, 3)), 3).sign == 0

    def test_bad_k(self):
        with pytest.raises(ValueError):
            trace_power(np.ones((2, 2)), 0)


class TestMatrixTree:
    @pytest.mark.parametrize("n,val", [(4, 9 / 5), (5, 129 / 5), (6, 3552 / 25)])
    def test_frozen(self, n, val):
        assert spanning_tree_pf(make_symmetric_matrix(fixed_symmetric(n), 0.2)).value == pytest.approx(val, rel=1e-12)

    @pytest.mark.parametrize("n", range(2, 12))
    def test_cayley(self, n):
        s = make_symmetric_matrix(np.ones((n, n)), 1.0)
        assert spanning_tree_pf(s).value == pytest.approx(n ** (n - 2), rel=1e-12)

    @given(st.integers(2, 7), st.integers(0, 2**32))
    def test_any_cofactor(self, n, seed):
        s = random_symmetric_matrix(n, 0.2, np.random.default_rng(seed))
        vals = [spanning_tree_pf(s, c).log for c in range(n)]
        assert max(vals) - min(vals) < 1e-10

    def test_laplacian_rows_sum_to_zero(self, rng):
        lap = laplacian(random_symmetric_matrix(6, 0.3, rng))
        np.testing.assert_allclose(lap.sum(axis=1), 0, atol=1e-14)

    def test_needs_two_vertices(self):
        with pytest.raises(InvariantError):
            spanning_tree_pf(make_symmetric_matrix(np.zeros((1, 1)), 1.0))


class TestSinkhorn:
    @given(st.integers(2, 30), st.floats(0.05, 1.0), st.integers(0, 2**32))
    def test_converges_and_rescales(self, n, delta, seed):
        a = random_weight_matrix(n, delta, np.random.default_rng(seed))
        sc = sinkhorn_scale(a)
        assert sc.residual <= 1e-8
        rebuilt = sc.row_factors[:, None] * a.entries * sc.col_factors[None, :]
        np.testing.assert_allclose(rebuilt, sc.scaled, rtol=1e-10)

    def test_already_doubly_stochastic(self):
        sc = sinkhorn_scale(np.full((4, 4), 0.25))
        assert sc.iterations == 0

    def test_not_converged(self, rng):
        a = random_weight_matrix(10, 0.01, rng)
        with pytest.raises(NotConverged) as exc:
            sinkhorn_scale(a, tol=1e-15, max_iter=2)
        assert exc.value.iterations == 2

    def test_rejects_zero_entries(self):
        with pytest.raises(InvariantError):
            sinkhorn_scale(np.eye(3))


class TestBracket:
    def test_van_der_waerden_is_tight_for_uniform(self):
        lo, hi = scaled_permanent_bounds(np.full((6, 6), 1 / 6))
        exact = math.lgamma(7) - 6 * math.log(6)
        assert lo <= exact <= hi
        assert exact - lo < 1e-12

    @given(st.integers(2, 9), st.floats(0.05, 1.0), st.integers(0, 2**32))
    def test_contains_exact(self, n, delta, seed):
        a = random_weight_matrix(n, delta, np.random.default_rng(seed))
        rep = permanent_bracket(a)
        assert rep.contains(permanent_ryser(a))
        assert rep.log_ratio >= 0
        # ratio is bounded by n^n / n!
        assert rep.upper.log - rep.lower.log <= n * math.log(n) - math.lgamma(n + 1) + 1e-6

    def test_ones(self):
        rep = permanent_bracket(np.ones((5, 5)))
        assert rep.lower.value == pytest.approx(120, rel=1e-12)
        assert rep.upper.value == pytest.approx(5 ** 5, rel=1e-12)
        assert rep.exact.value == pytest.approx(120)

    def test_one_by_one(self):
        rep = permanent_bracket(np.array([[0.3]]))
        assert rep.value.value == rep.lower.value == rep.upper.value == pytest.approx(0.3)

    def test_report_dispatch(self, rng):
        a = random_weight_matrix(6, 0.5, rng)
        assert permanent_report(a).method == "exact-oracle"
        assert trace_report(a).method == "trace-power"

    def test_report_order_enforced(self):
        one, two = LogValue.from_float(1), LogValue.from_float(2)
        with pytest.raises(InvariantError):
            PartitionReport(one, two, two, "x")

    def test_walk_and_tree_totals_agree(self, rng):
        a = random_weight_matrix(6, 0.3, rng)
        assert trace_power(a, 6).value == pytest.approx(walk_profile(a).total, rel=1e-12)
        s = random_symmetric_matrix(7, 0.3, rng)
        assert spanning_tree_pf(s).value == pytest.approx(tree_profile(s).total, rel=1e-12)
