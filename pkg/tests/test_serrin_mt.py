import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orlicz_lab.corpus import w1n0_corpus
from orlicz_lab.inequalities import serrin
from orlicz_lab.inequalities.moser_trudinger import (beta_ceiling, compute_Cr, corpus_reports,
                                                     fit_Cn, gradient_norm, load_calibration,
                                                     mean_product_check, mode_A_rhs,
                                                     mt_check, mt_constant, series_S)
from orlicz_lab.inequalities.serrin import InequalityError
from orlicz_lab.profiles import BallDomain, constant, truncated_log

B1 = BallDomain(2, 1.0)


class TestSerrin:
    def test_examples(self):
        assert serrin.serrin_bound([1.0], [1.0], 2.0) == pytest.approx(1.0)
        assert serrin.serrin_bound([2.0], [0.0], 1.0) == pytest.approx(2.0)
        bound = serrin.serrin_bound([1.0, 1.0], [0.0, 1.0], 2.0)
        golden = serrin.quadratic_root(1.0, 1.0)
        assert golden == pytest.approx((1 + math.sqrt(5)) / 2)
        assert bound >= golden
        assert serrin.largest_admissible_z([1.0, 1.0], [0.0, 1.0], 2.0, 10.0) == \
            pytest.approx(golden, abs=1e-4)

    @pytest.mark.parametrize("alphas, betas, delta", [([1.0], [2.0], 2.0), ([0.0], [0.5], 1.0),
                                                      ([1.0, 2.0], [0.5], 1.0), ([1.0], [0.5], 0.0)])
    def test_invalid(self, alphas, betas, delta):
        with pytest.raises(InequalityError):
            serrin.serrin_bound(alphas, betas, delta)

    def test_soundness_random(self, rng):
        for _ in range(200):
            m = rng.integers(1, 4)
            delta = rng.uniform(0.5, 4.0)
            alphas = rng.uniform(0.05, 5.0, m)
            betas = rng.uniform(0.0, 0.95, m) * delta
            bound = serrin.serrin_bound(alphas, betas, delta)
            z = serrin.largest_admissible_z(alphas, betas, delta, 10 * bound, 20001)
            assert z <= bound * (1 + 1e-12)


class TestSeries:
    def test_partial_sums(self):
        terms = [math.gamma(0.5 * j + 1) ** 2 / math.factorial(j) for j in range(1, 5)]
        np.testing.assert_allclose(terms, [math.pi / 4, 0.5, 0.2945243, 1 / 6], rtol=1e-6)

    @pytest.mark.parametrize("r, S", [(0.5, 1.94559943487486), (0.6, 2.51249562812990),
                                      (0.75, 4.16258870800545), (0.9, 10.4912277836681)])
    def test_against_mpmath(self, r, S):
        res = series_S(r)
        assert res.S == pytest.approx(S, rel=1e-11)
        assert res.tail_bound < 1e-12

    def test_Cr_values(self):
        assert compute_Cr(0.5) == pytest.approx(1.94559943487486, rel=1e-11)
        assert compute_Cr(0.75) == pytest.approx(72.1257770867114, rel=1e-10)
        assert compute_Cr(0.9) == pytest.approx(1.53970261758695e9, rel=1e-9)

    def test_cauchy_in_tol(self):
        a = series_S(0.7, 1e-8).S
        b = series_S(0.7, 5e-9).S
        assert abs(a - b) < 1e-8

    @pytest.mark.parametrize("r", [0.0, 1.0, 1.5])
    def test_range(self, r):
        with pytest.raises(InequalityError):
            compute_Cr(r)


class TestMoserTrudinger:
    def test_zero(self):
        rep = mt_check(constant(0.0), B1, "B")
        assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.margin == 0.0

    def test_truncated_log_example(self):
        u = truncated_log(2.0)
        assert gradient_norm(u, B1) == pytest.approx(math.sqrt(4 * math.pi), rel=1e-10)
        rep = mt_check(u, B1, "B")
        assert rep.rhs == pytest.approx(math.sqrt(math.pi + 1), rel=1e-10)
        assert rep.ok

    def test_mt_constant(self):
        assert mt_constant(2) == pytest.approx(math.sqrt(4 * math.pi))

    def test_scaling(self):
        u = truncated_log(1.5)
        a, b = mt_check(u, B1, "B"), mt_check(u.scaled(2.0), B1, "B")
        assert b.lhs == pytest.approx(2 * a.lhs, rel=1e-7)
        assert b.rhs == pytest.approx(2 * a.rhs, rel=1e-12)

    def test_boundary_condition_required(self):
        with pytest.raises(InequalityError):
            mt_check(constant(1.0), B1, "B")

    @pytest.mark.parametrize("n", [2, 3])
    def test_mode_B_corpus(self, n):
        reps = corpus_reports(w1n0_corpus(), BallDomain(n, 1.0), "B")
        assert len(reps) == 20 and all(r.ok for r in reps)

    @pytest.mark.parametrize("r", [0.6, 0.75, 0.9])
    def test_mode_A_corpus(self, r):
        assert all(rep.ok for rep in corpus_reports(w1n0_corpus(), B1, "A", r))

    def test_mode_A_needs_r(self):
        with pytest.raises(InequalityError):
            mt_check(truncated_log(1.0), B1, "A")

    def test_mode_A_rhs_formula(self):
        r, grad = 0.75, 2.0
        delta = (1 - r) / (2 * r)
        expected = compute_Cr(r) ** delta * math.log1p(math.pi ** -4) ** -delta * grad \
            / math.sqrt(4 * math.pi)
        assert mode_A_rhs(grad, B1, r) == pytest.approx(expected, rel=1e-12)


class TestMeanProduct:
    def test_constant(self):
        rep = mean_product_check(constant(2.0), B1, 1.0, T=1.0)
        assert rep.lhs == pytest.approx(math.pi**2, rel=1e-10)
        assert rep.rhs >= load_calibration(2)["C_n"] * math.pi**2 >= math.pi**2

    def test_shift_invariance(self):
        w = truncated_log(2.0).scaled(0.1)
        a = mean_product_check(w, B1, 1.0)
        b = mean_product_check(w.shifted(3.0), B1, 1.0)
        assert b.lhs == pytest.approx(a.lhs, rel=1e-9)

    @given(st.floats(0.5, 5.0), st.floats(0.5, 2.0))
    def test_family(self, L, p):
        rep = mean_product_check(truncated_log(L).scaled(0.1), B1, p)
        assert rep.ok

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_calibration_reproducible(self, n):
        cal = load_calibration(n)
        assert cal["beta_n"] <= beta_ceiling(n) * (1 + 1e-12)
        assert cal["C_n"] <= cal["cap"]
        ball = BallDomain(n, 1.0)
        assert fit_Cn(w1n0_corpus(), ball, cal["beta_n"]) == pytest.approx(cal["C_n"], rel=1e-6)

    def test_gradient_bound_enforced(self):
        with pytest.raises(InequalityError):
            mean_product_check(truncated_log(2.0), B1, 1.0, T=0.1)
