"""Energy inequality and Moser iteration on radial profiles.

Schedule: ``q_j = r^{-j}``, ``h_j = R + R 2^{-j}`` and
``K_j = (h_j - h_{j+1})^{-1} + q_j``.  Each step bounds the exponential
norm of ``u_bar = |u| + k`` with exponent ``n q_j`` on ``B_{h_{j+1}}``; as
``q_j`` grows these norms approach ``sup u_bar`` on ``B_R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..orlicz import DEFAULT_TOL, exp_norm, radial_integral, sup_norm
from ..pde import CoefficientSet, PdeProblem, compute_k
from ..profiles import BallDomain, RadialProfile
from .moser_trudinger import gradient_norm
from .serrin import InequalityError

Q_STOP = 256.0


@dataclass(frozen=True)
class IterationSchedule:
    r: float
    R: float
    entries: tuple

    @classmethod
    def build(cls, r: float, R: float, q_stop: float = Q_STOP) -> "IterationSchedule":
        """Entries ``(j, q_j, h_j, K_j)`` up to the first ``q_j > q_stop``."""
        if not 0 < r < 1:
            raise InequalityError("the schedule needs 0 < r < 1")
        if not 0 < R <= 1:
            raise InequalityError("the schedule needs 0 < R <= 1")
        rows, j = [], 0
        while True:
            q = r ** (-j)
            h = R + R * 2.0**-j
            # h_j - h_{j+1} = R 2^{-j-1}, written out to avoid cancellation
            rows.append((j, q, h, 2.0 ** (j + 1) / R + q))
            if q > q_stop:
                break
            j += 1
        return cls(r, R, tuple(rows))

    @property
    def growth_constant(self) -> float:
        """Smallest C with ``K_j <= C^{j+1}`` over the recorded entries."""
        return max(K ** (1.0 / (j + 1)) for j, _, _, K in self.entries)

    def radii(self) -> np.ndarray:
        return np.array([e[2] for e in self.entries])


@dataclass(frozen=True)
class TruncationSpec:
    """``F(t) = t^q`` for ``t <= l`` and ``q l^{q-1} t - (q-1) l^q`` above."""

    k: float
    l: float
    q: float

    def __post_init__(self):
        if not self.l > self.k:
            raise InequalityError("truncation level l must exceed k")
        if self.q < 1:
            raise InequalityError("truncation power q must be >= 1")
        if self.k < 0:
            raise InequalityError("k must be nonnegative")

    def F(self, t):
        t = np.asarray(t, dtype=float)
        q, l = self.q, self.l
        return np.where(t <= l, np.abs(t) ** q, q * l ** (q - 1) * t - (q - 1) * l**q)

    def dF(self, t):
        t = np.asarray(t, dtype=float)
        q, l = self.q, self.l
        return np.where(t <= l, q * np.abs(t) ** (q - 1), q * l ** (q - 1) + 0.0 * t)

    def d2F(self, t):
        t = np.asarray(t, dtype=float)
        q, l = self.q, self.l
        return np.where(t <= l, q * (q - 1) * np.abs(t) ** (q - 2), 0.0 * t)

    def beta(self, n: int) -> float:
        """Exponent ``n q - n + 1`` of the matching power test function."""
        return n * self.q - n + 1

    def junction_jumps(self) -> tuple:
        """Value and slope jumps of F at ``t = l`` (both zero for a C1 F)."""
        l, eps = self.l, 1e-9 * max(1.0, self.l)
        lo, hi = np.array([l - eps]), np.array([l + eps])
        q = self.q
        left_v, right_v = l**q, q * l ** (q - 1) * l - (q - 1) * l**q
        return abs(left_v - right_v), abs(float(self.dF(lo)[0] - self.dF(hi)[0]))


# -- energy inequality -------------------------------------------------------

@dataclass(frozen=True)
class EnergyReport:
    lhs: float
    I_a: float
    I_b: float
    I_c: float
    I_d: float
    d_constant: float

    @property
    def rhs(self) -> float:
        return self.I_a + self.I_b + self.I_c + self.I_d

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs + 1e-9 * max(1.0, abs(self.rhs))


def _crossings(f, lo: float, hi: float, level: float, num: int = 4001) -> list:
    x = np.linspace(lo, hi, num)[1:-1]
    y = f(x) - level
    out = []
    for i in np.flatnonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0):
        out.append(brentq(lambda t: float(f(np.array([t]))[0] - level), x[i], x[i + 1],
                          xtol=1e-15))
    return out


def bar_coefficients(coeffs: CoefficientSet, k: float):
    """``b_bar = b + k^{1-n} e`` and ``d_bar = d + k^{1-n} f + k^{-n} g`` as callables."""
    n = coeffs.n
    if k == 0:
        if not coeffs.is_homogeneous():
            raise InequalityError("k = 0 requires e = f = g = 0")
        return coeffs.b, coeffs.d

    def bb(x):
        return coeffs.b(x) + k ** (1 - n) * coeffs.e(x)

    def dd(x):
        return coeffs.d(x) + k ** (1 - n) * coeffs.f(x) + k ** (-n) * coeffs.g(x)

    return bb, dd


def energy_inequality_check(problem: PdeProblem, trunc: TruncationSpec, eta: RadialProfile,
                            coeffs: Optional[CoefficientSet] = None,
                            tol: float = 1e-10) -> EnergyReport:
    """Compare ``||eta v_x||_n^n`` with the four right-hand terms

        n a int |eta_x v| |eta v_x|^{n-1} + n q^{n-1} int b_bar |eta v|^{n-1} |eta_x v|
        + int c eta v |eta v_x|^{n-1} + n q^n int d_bar (eta v)^n

    where ``v = F(|u| + k)``.  The factor n in front of the last term is the
    constant obtained from the test function ``eta^n G(u_bar)`` argument.
    """
    n = problem.n
    coeffs = CoefficientSet.model(problem, 0.9) if coeffs is None else coeffs
    k, q = trunc.k, trunc.q
    bb, dd = bar_coefficients(coeffs, k)
    u = problem.u
    R = min(problem.radius, eta.radius)
    ball = BallDomain(n, R)

    def ubar(x):
        return np.abs(u(x)) + k

    def v(x):
        return trunc.F(ubar(x))

    def vx(x):
        return trunc.dF(ubar(x)) * np.sign(u(x)) * u.derivative(x)

    pts = set(problem.breakpoints) | set(eta.interior_breakpoints)
    pts |= set(_crossings(ubar, 0.0, R, trunc.l))
    pts = tuple(sorted(p for p in pts if 0 < p < R))

    def integral(g):
        return radial_integral(g, ball, tol, breakpoints=pts)

    lhs = integral(lambda x: np.abs(eta(x) * vx(x)) ** n)
    I_a = n * coeffs.a * integral(
        lambda x: np.abs(eta.derivative(x) * v(x)) * np.abs(eta(x) * vx(x)) ** (n - 1))
    I_b = n * q ** (n - 1) * integral(
        lambda x: bb(x) * np.abs(eta(x) * v(x)) ** (n - 1) * np.abs(eta.derivative(x) * v(x)))
    I_c = integral(lambda x: coeffs.c(x) * eta(x) * v(x) * np.abs(eta(x) * vx(x)) ** (n - 1))
    I_d = n * q**n * integral(lambda x: dd(x) * (eta(x) * v(x)) ** n)
    return EnergyReport(lhs, I_a, I_b, I_c, I_d, float(n))


# -- Moser trace -----------------------------------------------------------

@dataclass
class IterationTrace:
    schedule: IterationSchedule
    k: float
    values: list = field(default_factory=list)
    sup_R: float = math.nan
    norm_2R: float = math.nan
    grad_R: float = math.nan
    stop_reason: str = ""
    aborted: bool = False

    @property
    def terminal(self) -> float:
        return self.values[-1] if self.values else math.nan

    @property
    def finite(self) -> bool:
        return not self.aborted and all(math.isfinite(v) for v in self.values)

    @property
    def sup_constant(self) -> float:
        """``C_hat`` in ``||u||_{inf,R} <= C_hat R^{-1/(1-r)} (||u||_{E_{nr},2R} + k)``."""
        r, R = self.schedule.r, self.schedule.R
        return self.sup_R / (R ** (-1.0 / (1.0 - r)) * (self.norm_2R + self.k))

    @property
    def grad_constant(self) -> float:
        """``C_hat`` in ``||u_x||_{n,R} <= C_hat R^{-1} (||u||_{E_{nr},2R} + k)``."""
        R = self.schedule.R
        return self.grad_R / (self.norm_2R + self.k) * R

    @property
    def terminal_gap(self) -> float:
        """Relative distance of the last iterate from ``sup u_bar`` on ``B_R``."""
        target = self.sup_R + self.k
        return abs(self.terminal - target) / target if target > 0 else abs(self.terminal)


def moser_trace(u: RadialProfile, coeffs: Optional[CoefficientSet], R: float, r: float,
                tol: float = DEFAULT_TOL, q_stop: float = Q_STOP) -> IterationTrace:
    """Exponential norms ``||u_bar||_{E_{n q_j}, h_{j+1}}`` along the schedule."""
    if u.radius < 2 * R * (1 - 1e-14):
        raise InequalityError("the profile must cover B_{2R}")
    sched = IterationSchedule.build(r, R, q_stop)
    n = coeffs.n if coeffs is not None else 2
    if coeffs is None:
        k = 0.0
    else:
        k = compute_k(coeffs, BallDomain(n, 2 * R), tol=tol)
    trace = IterationTrace(sched, k)
    if not math.isfinite(k):
        trace.aborted, trace.stop_reason = True, "k is infinite"
        return trace
    ubar = u.abs().shifted(k) if k else u.abs()
    prev = None
    for j, q, h, _ in sched.entries:
        h_next = R + R * 2.0 ** -(j + 1)
        val = exp_norm(ubar.restricted(h_next), n * q, BallDomain(n, h_next), tol).value
        trace.values.append(val)
        if not math.isfinite(val):
            trace.aborted, trace.stop_reason = True, f"iterate {j} is infinite"
            return trace
        if prev is not None and abs(val - prev) <= tol * abs(val):
            trace.stop_reason = f"relative change below tol at j={j}"
            break
        prev = val
    else:
        trace.stop_reason = f"q_j exceeded {q_stop:g}"
    trace.sup_R = sup_norm(u, R)
    trace.norm_2R = exp_norm(u.abs().restricted(2 * R), n * r, BallDomain(n, 2 * R), tol).value
    trace.grad_R = gradient_norm(u, BallDomain(n, R), tol)
    return trace


# -- the limit q -> infinity ------------------------------------------------

@dataclass(frozen=True)
class LimitReport:
    q_list: tuple
    norms: tuple
    sup: float

    @property
    def gaps(self) -> tuple:
        """Relative gaps ``|norm_q - sup| / sup``."""
        if self.sup == 0:
            return tuple(float(x) for x in self.norms)
        return tuple(abs(x - self.sup) / self.sup for x in self.norms)

    @property
    def etas(self) -> tuple:
        """``eta_q`` with ``sup = norm_q (1 + eta_q)``."""
        return tuple(self.sup / x - 1.0 if x > 0 else 0.0 for x in self.norms)

    @property
    def divergent(self) -> bool:
        return any(not math.isfinite(x) for x in self.norms)

    def converged(self, within: float) -> bool:
        return not self.divergent and self.gaps[-1] <= within

    @property
    def monotone_gaps(self) -> bool:
        g = self.gaps
        return all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(g, g[1:]))


def exp_limit_check(f: RadialProfile, ball: BallDomain, q_list: Sequence[float],
                    tol: float = 1e-10) -> LimitReport:
    """``||f||_{E_q}`` for increasing q against the supremum of ``|f|``."""
    q_list = tuple(float(q) for q in q_list)
    norms = tuple(exp_norm(f.restricted(ball.R), q, ball, tol).value for q in q_list)
    return LimitReport(q_list, norms, sup_norm(f, ball.R))
