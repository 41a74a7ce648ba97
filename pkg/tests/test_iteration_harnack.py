import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orlicz_lab.counterexample import build_counterexample
from orlicz_lab.inequalities.continuity import (G, SHRINK_LIMIT, OscillationState, concentrated,
                                                kbar_from_coefficients, log_kbar,
                                                modulus_exponent, oscillation_recursion,
                                                shrink_check, split_bound)
from orlicz_lab.inequalities.harnack import (constant_chain_oracle, dilate, dilation_check,
                                             eps_sensitivity, harnack_chain)
from orlicz_lab.inequalities.iteration import (IterationSchedule, TruncationSpec,
                                               energy_inequality_check, exp_limit_check,
                                               moser_trace)
from orlicz_lab.inequalities.serrin import InequalityError
from orlicz_lab.orlicz import N_spec, constant_norm
from orlicz_lab.pde import CoefficientSet, PdeProblem
from orlicz_lab.profiles import BallDomain, constant, log_profile, smoothstep_cutoff, truncated_log

B1 = BallDomain(2, 1.0)


@pytest.fixture(scope="module")
def sol():
    return build_counterexample(2, 0.1)


class TestSchedule:
    def test_invariants(self):
        s = IterationSchedule.build(0.9, 0.25)
        j, q, h, K = map(np.array, zip(*s.entries))
        assert np.all(np.diff(q) > 0) and np.all(np.diff(h) <= 0)
        # R 2^-j drops below one ulp of R at j = 53
        assert np.all(np.diff(h[:52]) < 0) and np.all(h[:52] > 0.25)
        assert h[-1] - 0.25 < 1e-15
        assert q[-1] > 256 and q[-2] <= 256
        assert len(s.entries) == 54
        C = s.growth_constant
        assert np.all(K <= C ** (j + 1) * (1 + 1e-12))

    @pytest.mark.parametrize("r, R", [(1.0, 0.5), (0.5, 0.0), (0.5, 2.0)])
    def test_invalid(self, r, R):
        with pytest.raises(InequalityError):
            IterationSchedule.build(r, R)


class TestTruncation:
    @given(st.floats(0.0, 2.0), st.floats(0.1, 3.0), st.floats(1.0, 6.0))
    def test_c1_junction_and_concave_cap(self, k, dl, q):
        t = TruncationSpec(k, k + dl, q)
        jv, jd = t.junction_jumps()
        scale = max(1.0, t.F(t.l))
        assert jv <= 1e-12 * scale and jd <= 1e-6 * max(1.0, t.dF(t.l))
        above = np.linspace(t.l, t.l + 5, 20)[1:]
        assert np.all(t.d2F(above) <= 0)

    def test_validation(self):
        with pytest.raises(InequalityError):
            TruncationSpec(1.0, 0.5, 2.0)
        with pytest.raises(InequalityError):
            TruncationSpec(0.0, 1.0, 0.5)


class TestEnergy:
    def test_constant_solution(self):
        prob = PdeProblem(constant(2.0), None, 2)
        rep = energy_inequality_check(prob, TruncationSpec(0.0, 5.0, 1.0),
                                      smoothstep_cutoff(0.5, 1.0))
        assert rep.lhs == 0.0 and rep.ok

    @pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize("l", [0.5, 1.0, 10.0])
    def test_counterexample(self, sol, q, l):
        prob = PdeProblem(sol.u, sol.V, 2)
        rep = energy_inequality_check(prob, TruncationSpec(0.0, l, q), smoothstep_cutoff(0.5, 1.0))
        assert rep.ok and rep.margin > 0


class TestMoserTrace:
    def test_constant_closed_form(self):
        c, R, r = 1.7, 0.25, 0.8
        tr = moser_trace(constant(c), None, R, r)
        for (j, q, _, _), val in zip(tr.schedule.entries, tr.values):
            m = BallDomain(2, R + R * 2.0 ** -(j + 1)).measure
            assert val == pytest.approx(c * math.log1p(1 / m) ** (-1 / (2 * q)), rel=1e-7)
        assert tr.terminal_gap < 0.01

    def test_zero(self):
        tr = moser_trace(constant(0.0), None, 0.25, 0.9)
        assert tr.finite and all(v == 0.0 for v in tr.values)

    def test_counterexample(self):
        s = build_counterexample(2, 1e-2)
        coeffs = CoefficientSet.model(PdeProblem(s.u, s.V, 2), 0.9)
        tr = moser_trace(s.u, coeffs, 0.25, 0.9)
        assert tr.finite and tr.k == 0.0
        assert tr.terminal_gap <= 0.02
        assert tr.sup_R == pytest.approx(s.a, rel=1e-12)

    def test_unbounded_aborts(self):
        tr = moser_trace(log_profile(1.0), None, 0.25, 0.9)
        assert not tr.finite and tr.aborted


class TestExpLimit:
    def test_constant_closed_form(self):
        rep = exp_limit_check(constant(2.0), B1, [8, 64, 512])
        expected = [2.0 * math.log1p(1 / math.pi) ** (-1 / q) for q in (8, 64, 512)]
        np.testing.assert_allclose(rep.norms, expected, rtol=1e-8)
        assert rep.monotone_gaps
        assert rep.gaps[-1] == pytest.approx(2.51504257097343e-3, rel=1e-6)

    def test_zero(self):
        rep = exp_limit_check(constant(0.0), B1, [8, 512])
        assert rep.norms == (0.0, 0.0)

    def test_counterexample_approaches_a(self, sol):
        rep = exp_limit_check(sol.u, B1, [8, 64, 512])
        assert rep.sup == pytest.approx(sol.a)
        assert rep.monotone_gaps and rep.gaps[-1] < 0.01

    def test_log_diverges(self):
        rep = exp_limit_check(log_profile(1.0), B1, [2.0, 8.0])
        assert rep.divergent


class TestHarnackChain:
    @pytest.mark.parametrize("c", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("n", [2, 3])
    def test_constant_oracle(self, c, n):
        R0 = 1 / 16
        rep = harnack_chain(constant(c), R0, 0.8, n)
        oracle = constant_chain_oracle(c, R0, 0.8, n)
        np.testing.assert_allclose(rep.quantities, oracle, rtol=1e-6)
        assert rep.harnack_quotient == pytest.approx(1.0)

    def test_homogeneity(self, sol):
        a = harnack_chain(sol.u, 1 / 16, 0.8)
        b = harnack_chain(sol.u.scaled(3.0), 1 / 16, 0.8, eps=3e-9)
        np.testing.assert_allclose(b.quantities, 3 * np.array(a.quantities), rtol=1e-6)
        assert b.harnack_quotient == pytest.approx(a.harnack_quotient, rel=1e-9)

    def test_counterexample(self, sol):
        rep = harnack_chain(sol.u, 1 / 16, 0.8)
        assert rep.finite
        # R0 = 1/16 < eps lies in the inner piece, so the inf is u(R0) there
        assert rep.harnack_quotient == pytest.approx(sol.a / float(sol.u(1 / 16)), rel=1e-8)

    def test_eps_sensitivity_small(self, sol):
        assert eps_sensitivity(sol.u, 1 / 16, 0.8) < 1e-6

    def test_preconditions(self, sol):
        with pytest.raises(InequalityError):
            harnack_chain(sol.u, 0.2, 0.8)
        with pytest.raises(InequalityError):
            harnack_chain(log_profile(1.0), 1 / 16, 0.8)
        with pytest.raises(InequalityError):
            harnack_chain(constant(-1.0), 1 / 16, 0.8)


class TestDilation:
    def test_identity(self, sol):
        rep = dilation_check(sol.V, 0.8, 1 / 16, 1 / 16)
        assert rep.lhs == pytest.approx(rep.rhs, rel=1e-9)

    def test_constant(self):
        R0 = 1 / 16
        rep = dilation_check(constant(1.0), 0.8, R0 / 2, R0)
        assert dilate(constant(1.0), R0 / 2, R0, 2)(0.1) == pytest.approx(0.25)
        spec = N_spec(2, 0.8)
        assert rep.lhs == pytest.approx(constant_norm(0.25, spec, BallDomain(2, 8 * R0)), rel=1e-7)
        assert rep.rhs == pytest.approx(constant_norm(1.0, spec, BallDomain(2, 4 * R0)), rel=1e-7)
        assert rep.ok

    def test_potential(self, sol):
        assert dilation_check(sol.V, 0.8, 1 / 32, 1 / 16).ok


class TestShrink:
    def test_zero(self):
        rep = shrink_check(constant(0.0), 0.8, [1e-5, 1e-7])
        assert rep.rows == () and rep.C_hat == 0.0

    def test_constant(self):
        rep = shrink_check(constant(1.0), 0.8, [1e-5, 1e-7])
        for row in rep.rows:
            ball = BallDomain(2, row.R)
            assert row.rhs == pytest.approx(constant_norm(1.0, N_spec(2, 0.8), ball), rel=1e-7)
            assert row.lhs == pytest.approx(constant_norm(1.0, N_spec(2, 0.9), ball), rel=1e-7)
            assert row.G == G(row.R, 0.8)
            assert math.isfinite(row.ratio)

    def test_radius_limit(self):
        with pytest.raises(InequalityError):
            shrink_check(constant(1.0), 0.8, [SHRINK_LIMIT * 2])

    def test_concentrated_stable(self, sol):
        rep = shrink_check(concentrated(sol.V), 0.8, [1e-6, 1e-7, 1e-8])
        assert rep.spread <= 2.0


class TestOscillation:
    def test_geometric(self):
        res = oscillation_recursion(OscillationState(0.5, 0.0, 0.25, lambda rho: 0.0),
                                    SHRINK_LIMIT, 60)
        np.testing.assert_array_equal(res.omega, 2.0 ** -np.arange(61))

    def test_log_forcing(self):
        g = 0.25
        state = OscillationState(0.5, 1.0, g, log_kbar(g))
        res = oscillation_recursion(state, SHRINK_LIMIT, 80)
        assert math.isfinite(res.K) and res.bound_holds()
        assert res.slope <= -g + 0.05
        K_kbar = math.log(3.0) ** -g
        for m in range(10, 81):
            assert res.omega[m] <= split_bound(state, SHRINK_LIMIT, m, K_kbar) * (1 + 1e-12)

    def test_constant_forcing_limit(self):
        res = oscillation_recursion(OscillationState(0.6, 0.5, 0.1, lambda rho: 2.0),
                                    SHRINK_LIMIT, 200)
        assert res.omega[-1] == pytest.approx(0.5 * 2.0 / 0.4, rel=1e-12)

    def test_nonincreasing(self):
        res = oscillation_recursion(OscillationState(0.7, 1.0, 0.2, log_kbar(0.2, 0.1)),
                                    SHRINK_LIMIT, 60)
        assert np.all(res.omega >= 0) and np.all(np.diff(res.omega) <= 0)

    def test_from_harnack_constant(self):
        st_ = OscillationState.from_harnack_constant(3.0, 0.1, log_kbar(0.1))
        assert (st_.theta, st_.tau) == (0.5, 1.5)
        with pytest.raises(InequalityError):
            OscillationState.from_harnack_constant(1.0, 0.1, log_kbar(0.1))

    def test_counterexample_coefficients(self):
        r = 0.8
        gamma = modulus_exponent(r, 2)
        V = build_counterexample(2, 1e-2).V
        kbar = kbar_from_coefficients(lambda rho: V.restricted(rho), r)
        res = oscillation_recursion(OscillationState(0.5, 1.0, gamma, kbar), SHRINK_LIMIT, 60)
        assert math.isfinite(res.K) and res.bound_holds()
        # omega(rho) <= K |log rho|^-gamma along rho_m = R 3^-m
        rho = SHRINK_LIMIT * 3.0 ** -np.arange(10, 61)
        K_rho = np.max(res.omega[10:] * np.abs(np.log(rho)) ** gamma)
        assert math.isfinite(K_rho)

    def test_start_radius(self):
        with pytest.raises(InequalityError):
            oscillation_recursion(OscillationState(0.5, 0.0, 0.1, log_kbar(0.1)), 0.1, 10)

    def test_truncated_log_kbar_monotone(self):
        # enlarging the coefficient does not decrease kbar
        small = kbar_from_coefficients(lambda rho: truncated_log(1.0, rho), 0.8)
        big = kbar_from_coefficients(lambda rho: truncated_log(2.0, rho), 0.8)
        assert big(1e-6) >= small(1e-6)
