"""The explicit radial family ``-Delta_n u = V u^{n-1}`` on the unit ball.

For ``0 < eps < 1/8`` the solution is

    u(rho) = a - b rho^{n/(n-1)}   on [0, eps)
    u(rho) = -log(rho)             on [eps, 1]

with ``a = (n-1)/n - log(eps)`` and ``b = ((n-1)/n) eps^{-n/(n-1)}`` chosen
so that u is C1 at ``rho = eps``.  On the inner disc the radial n-Laplacian
of the power piece is the constant ``-n eps^{-n}``, hence
``V = n eps^{-n} / u^{n-1}`` there and ``V = 0`` outside.

The family keeps ``int N_r(V)`` bounded while ``u(0)/inf_{B_1/8} u`` and
``||u||_inf / ||u||_{E_{rn}}`` blow up, which is what limits the regularity
theory to ``r < 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

from .orlicz import DEFAULT_TOL, N_spec, eval_orlicz, exp_norm, luxemburg_norm, radial_integral
from .profiles import (C1, DISCONTINUOUS, BallDomain, Piece, RadialProfile,
                       constant_piece, log_piece, power_piece)

EPS_MIN = 1e-8
EPS_MAX = 1.0 / 8.0


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class CounterexampleSolution:
    n: int
    eps: float
    a: float
    b: float
    u: RadialProfile
    V: RadialProfile

    @property
    def ball(self) -> BallDomain:
        return BallDomain(self.n, 1.0)

    @property
    def scale(self) -> float:
        """Magnitude ``n eps^{-n}`` of the n-Laplacian on the inner disc."""
        return self.n * self.eps ** (-self.n)


@dataclass(frozen=True)
class SharpnessReport:
    eps: float
    r: float
    a: float
    b: float
    sup_u: float
    inf_B18: float
    ratio_B: float
    norm_V_Nr: float
    int_NrV: float
    norm_u_Ern: float
    ratio_A: float

    # names used by the sharpness discussion
    @property
    def coeff_norm(self) -> float:
        return self.norm_V_Nr

    @property
    def coeff_integral(self) -> float:
        return self.int_NrV

    def as_row(self) -> dict:
        return asdict(self)


CSV_FIELDS = ("eps", "r", "a", "b", "sup_u", "inf_B18", "ratio_B",
              "norm_V_Nr", "int_NrV", "norm_u_Ern", "ratio_A")


def coefficients(n: int, eps: float) -> tuple:
    a = (n - 1) / n - math.log(eps)
    b = (n - 1) / n * eps ** (-n / (n - 1))
    return a, b


def build_counterexample(n: int, eps: float) -> CounterexampleSolution:
    if int(n) != n or n < 2:
        raise ParameterError(f"dimension must be an integer >= 2, got {n}")
    if not EPS_MIN <= eps < EPS_MAX:
        raise ParameterError(f"eps must lie in [{EPS_MIN}, 1/8), got {eps}")
    n = int(n)
    a, b = coefficients(n, eps)
    p = n / (n - 1)
    inner = power_piece(a, b, p)
    u = RadialProfile((0.0, eps, 1.0), [inner, log_piece(1.0)], C1)

    scale = n * eps ** (-n)
    k = n - 1

    def v(x):
        return scale / inner.f(x) ** k

    def dv(x):
        return -k * scale * inner.df(x) / inner.f(x) ** (k + 1)

    def d2v(x):
        y, dy, d2y = inner.f(x), inner.df(x), inner.d2f(x)
        return scale * (k * (k + 1) * dy**2 / y ** (k + 2) - k * d2y / y ** (k + 1))

    V = RadialProfile((0.0, eps, 1.0), [Piece(v, dv, d2v, "potential"), constant_piece(0.0)],
                      DISCONTINUOUS)
    return CounterexampleSolution(n, eps, a, b, u, V)


def sharpness_metrics(sol: CounterexampleSolution, r: float,
                      tol: float = DEFAULT_TOL) -> SharpnessReport:
    """Both blow-up ratios and the size of the potential for exponent ``r``."""
    if not r > 0:
        raise ParameterError("r must be positive")
    n, ball = sol.n, sol.ball
    sup_u = sol.a  # u decreases, so the sup over B_{1/2} is u(0)
    inf_b18 = math.log(8.0)  # eps < 1/8, so the inf over B_{1/8} is -log(1/8)
    spec = N_spec(n, r)
    norm_v = luxemburg_norm(sol.V, spec, ball, tol).value
    vabs = sol.V

    def nv(rho):
        return eval_orlicz(spec, vabs(rho))

    int_nv = radial_integral(nv, ball, tol / 10.0, breakpoints=(sol.eps,))
    norm_u = exp_norm(sol.u, r * n, ball, tol).value
    ratio_a = sup_u / norm_u if norm_u > 0 else math.inf
    return SharpnessReport(sol.eps, r, sol.a, sol.b, sup_u, inf_b18, sup_u / inf_b18,
                           norm_v, int_nv, norm_u, ratio_a)


def ratio_B_closed_form(n: int, eps: float) -> float:
    return ((n - 1) / n + math.log(1.0 / eps)) / math.log(8.0)


def sweep(n: int, eps_list: Iterable[float], r_list: Iterable[float],
          tol: float = DEFAULT_TOL, workers: Optional[int] = None) -> list:
    """One report per (eps, r); eps is the outer loop, r the inner one."""
    eps_list, r_list = list(eps_list), list(r_list)
    for eps in eps_list:
        if not 0 < eps < EPS_MAX:
            raise ParameterError(f"eps must lie in (0, 1/8), got {eps}")
    jobs = [(eps, r) for eps in eps_list for r in r_list]
    sols = {eps: build_counterexample(n, eps) for eps in eps_list}

    def run(job):
        eps, r = job
        return sharpness_metrics(sols[eps], r, tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, jobs))
    return [run(j) for j in jobs]
