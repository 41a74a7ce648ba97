"""Named groups of pass/fail checks driven by ``orlicz-lab verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .corpus import w1n0_corpus
from .counterexample import build_counterexample, ratio_B_closed_form
from .inequalities.continuity import (OscillationState, concentrated, log_kbar,
                                      oscillation_recursion, shrink_check)
from .inequalities.harnack import constant_chain_oracle, dilation_check, harnack_chain
from .inequalities.moser_trudinger import corpus_reports, mean_product_check
from .pde import PdeProblem, TestFunction, strong_residual, weak_residual_terms
from .profiles import BallDomain, constant, truncated_log

SWEEP_EPS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _counterexample(n: int, tol: float) -> List[Check]:
    out = []
    for eps in SWEEP_EPS:
        sol = build_counterexample(n, eps)
        prob = PdeProblem(sol.u, sol.V, n)
        res = strong_residual(prob) / sol.scale
        out.append(Check(f"strong residual eps={eps:g}", res <= 1e-9, f"{res:.3g} (rel, tol 1e-9)"))
        jumps = max(max(jv, jd) for _, jv, jd in sol.u.continuity_defects())
        out.append(Check(f"C1 match eps={eps:g}", jumps <= 1e-12 * max(1.0, 1.0 / eps),
                         f"{jumps:.3g} (tol 1e-12 rel)"))
        u1 = float(sol.u(1.0))
        out.append(Check(f"u(1)=0 eps={eps:g}", u1 == 0.0, f"{u1:.3g}"))
        rb = sol.a / math.log(8.0)
        gap = abs(rb - ratio_B_closed_form(n, eps)) / rb
        out.append(Check(f"ratio_B closed form eps={eps:g}", gap <= 1e-12, f"{rb:.6g}"))
    sol = build_counterexample(n, 0.1)
    w = weak_residual_terms(PdeProblem(sol.u, sol.V, n), TestFunction.bump(0.05, 0.5))
    out.append(Check("weak residual, bump on (0.05, 0.5)", abs(w.value) <= 1e-6 * w.scale,
                     f"{w.value:.3g} vs scale {w.scale:.3g}"))
    return out


def _mt(n: int, tol: float) -> List[Check]:
    ball = BallDomain(n, 1.0)
    corpus = w1n0_corpus()
    out = []
    reps = corpus_reports(corpus, ball, "B", None, tol)
    worst = min(r.margin for r in reps)
    out.append(Check("mode B margins >= 0 on corpus", worst >= 0, f"min margin {worst:.6g}"))
    for r in (0.6, 0.75, 0.9):
        reps = corpus_reports(corpus, ball, "A", r, tol)
        worst = min(x.margin for x in reps)
        out.append(Check(f"mode A margins >= 0, r={r:g}", worst >= 0, f"min margin {worst:.6g}"))
    worst = math.inf
    for L in (0.5, 2.0, 5.0):
        rep = mean_product_check(truncated_log(L).scaled(0.1), ball, 1.0)
        worst = min(worst, rep.rhs - rep.lhs)
    out.append(Check("mean-value product bound", worst >= 0, f"min margin {worst:.6g}"))
    return out


def _harnack(n: int, tol: float) -> List[Check]:
    out = []
    R0, r = 1.0 / 16, 0.8
    for c in (0.5, 2.0):
        rep = harnack_chain(constant(c), R0, r, n, tol=tol)
        oracle = constant_chain_oracle(c, R0, r, n)
        gap = max(abs(a - b) / b for a, b in zip(rep.quantities, oracle))
        out.append(Check(f"constant chain c={c:g}", gap <= 1e-6, f"max rel gap {gap:.3g}"))
    sol = build_counterexample(n, 0.1)
    rep = harnack_chain(sol.u, R0, r, n, tol=tol)
    q = rep.harnack_quotient
    expect = sol.a / float(sol.u(R0))
    out.append(Check("counterexample chain finite", rep.finite,
                     "ratios " + ", ".join(f"{x:.6g}" for x in rep.ratios)))
    out.append(Check("Harnack quotient = u(0)/u(R0)", abs(q - expect) <= 1e-6 * expect,
                     f"{q:.6g}"))
    d = dilation_check(sol.V, r, R0 / 2, R0, n, tol)
    out.append(Check("dilation of V", d.ok, f"{d.lhs:.6g} <= {d.rhs:.6g}"))
    return out


def _oscillation(n: int, tol: float) -> List[Check]:
    out = []
    st = OscillationState(0.5, 0.0, 0.25, lambda rho: 0.0)
    res = oscillation_recursion(st, 3.0**-10, 40)
    err = float(np.max(np.abs(res.omega - 2.0 ** -np.arange(41))))
    out.append(Check("theta=0.5, tau=0 gives 2^-m", err == 0.0, f"max error {err:.3g}"))
    g = 0.25
    res = oscillation_recursion(OscillationState(0.5, 1.0, g, log_kbar(g)), 3.0**-10, 80)
    out.append(Check("log kbar modulus slope", res.slope <= -g + 0.05 and res.bound_holds(),
                     f"slope {res.slope:.6g}, K {res.K:.6g}"))
    sol = build_counterexample(n, 0.1)
    rep = shrink_check(concentrated(sol.V, n), 0.8, (1e-6, 1e-7, 1e-8), n, tol)
    out.append(Check("shrinking-ball constant stable", rep.spread <= 2.0,
                     f"C_hat {rep.C_hat:.6g}, spread {rep.spread:.6g}"))
    return out


SUITES: Dict[str, Callable[[int, float], List[Check]]] = {
    "counterexample": _counterexample,
    "mt": _mt,
    "harnack": _harnack,
    "oscillation": _oscillation,
}


def run_suite(name: str, n: int = 2, tol: float = 1e-8) -> List[Check]:
    if name == "all":
        checks = []
        for key in SUITES:
            checks.extend(SUITES[key](n, tol))
        return checks
    return SUITES[name](n, tol)
