"""Nested Orlicz norms on shrinking balls and the oscillation recursion.

``omega_m`` stands for the oscillation on ``B_{R 3^{-m}}``; the recursion
``omega_m = theta omega_{m-1} + tau kbar(R 3^{-(m-1)})`` unrolls to

    omega_m = theta^m omega_0 + tau sum_{j=1}^m theta^{j-1} kbar(R 3^{j-m}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..orlicz import DEFAULT_TOL, N_spec, luxemburg_norm
from ..profiles import BallDomain, RadialProfile
from .serrin import InequalityError

SHRINK_LIMIT = 3.0**-10


def shrink_exponent(r: float) -> float:
    """``eps' = (1 - r)/2``."""
    return (1.0 - r) / 2.0


def modulus_exponent(r: float, n: int) -> float:
    """``gamma = (1 - r)/(2n)``."""
    return (1.0 - r) / (2.0 * n)


def G(R: float, r: float) -> float:
    return abs(math.log(1.0 / R)) ** (-shrink_exponent(r))


@dataclass(frozen=True)
class ShrinkRow:
    R: float
    lhs: float
    rhs: float
    G: float

    @property
    def ratio(self) -> float:
        return self.lhs / (self.G * self.rhs)


@dataclass(frozen=True)
class ShrinkReport:
    rows: tuple

    @property
    def C_hat(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)

    @property
    def spread(self) -> float:
        """max/min of the per-radius constants (1 means perfectly stable)."""
        ratios = [row.ratio for row in self.rows]
        if not ratios:
            return 1.0
        return max(ratios) / min(ratios)


def shrink_check(h_of_R: Callable[[float], RadialProfile], r: float, R_list: Sequence[float],
                 n: int = 2, tol: float = DEFAULT_TOL) -> ShrinkReport:
    """``||h||_{(N_{r+eps'}),B_R}`` against ``G(R) ||h||_{(N_r),B_R}``.

    ``h_of_R(R)`` returns the function on ``B_R`` (so the caller chooses
    between restriction and rescaling); a plain profile is restricted.
    """
    if isinstance(h_of_R, RadialProfile):
        prof = h_of_R
        h_of_R = prof.restricted
    eps = shrink_exponent(r)
    rows = []
    for R in R_list:
        if not R < SHRINK_LIMIT:
            raise InequalityError(f"radius {R} is not below 3^-10")
        ball = BallDomain(n, R)
        h = h_of_R(R)
        rhs = luxemburg_norm(h, N_spec(n, r), ball, tol).value
        if rhs == 0:
            continue
        lhs = luxemburg_norm(h, N_spec(n, r + eps), ball, tol).value
        rows.append(ShrinkRow(R, lhs, rhs, G(R, r)))
    return ShrinkReport(tuple(rows))


def concentrated(h: RadialProfile, n: int = 2) -> Callable[[float], RadialProfile]:
    """``R -> R^{-n} h(x / R)`` on ``B_R``: the profile squeezed into ``B_R``
    with its integral kept fixed."""
    def make(R: float) -> RadialProfile:
        return h.dilated(1.0 / R, R ** (-n)).restricted(R)

    return make


# -- oscillation -----------------------------------------------------------

@dataclass(frozen=True)
class OscillationState:
    theta: float
    tau: float
    gamma: float
    kbar: Callable[[float], float]
    omega0: float = 1.0

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise InequalityError("theta must lie in (0, 1)")
        if self.tau < 0:
            raise InequalityError("tau must be nonnegative")

    @classmethod
    def from_harnack_constant(cls, C: float, gamma: float, kbar, omega0: float = 1.0):
        """``theta = (C-1)/(C+1)``, ``tau = 2C/(C+1)``."""
        if not C > 1:
            raise InequalityError("Harnack constant must exceed 1")
        return cls((C - 1) / (C + 1), 2 * C / (C + 1), gamma, kbar, omega0)


@dataclass(frozen=True)
class OscillationResult:
    omega: np.ndarray
    K: float
    slope: float
    m_fit: tuple
    gamma: float

    def bound_holds(self, m_min: int = 10) -> bool:
        """``omega_m <= K m^{-gamma}`` for every ``m >= m_min``."""
        m = np.arange(self.omega.size)
        sel = m >= m_min
        return bool(np.all(self.omega[sel] <= self.K * m[sel] ** (-self.gamma) * (1 + 1e-12)))


def oscillation_recursion(state: OscillationState, R: float, m_max: int,
                          m_fit: tuple = (20, 60), m_min: int = 10) -> OscillationResult:
    """Iterate the recursion and fit ``omega_m <= K m^{-gamma}`` for ``m >= m_min``."""
    if R > SHRINK_LIMIT * (1 + 1e-12):
        raise InequalityError("the recursion starts from R <= 3^-10")
    omega = np.empty(m_max + 1)
    omega[0] = state.omega0
    for m in range(1, m_max + 1):
        omega[m] = state.theta * omega[m - 1] + state.tau * state.kbar(R * 3.0 ** -(m - 1))
    m = np.arange(m_max + 1)
    sel = m >= m_min
    K = float(np.max(omega[sel] * m[sel] ** state.gamma)) if np.any(sel) else math.nan
    lo, hi = m_fit
    fit = (m >= lo) & (m <= hi) & (omega > 0)
    slope = math.nan
    if np.count_nonzero(fit) >= 2:
        slope = float(np.polyfit(np.log(m[fit]), np.log(omega[fit]), 1)[0])
    return OscillationResult(omega, K, slope, m_fit, state.gamma)


def split_bound(state: OscillationState, R: float, m: int, K_kbar: float) -> float:
    """Upper bound for omega_m from splitting the sum at j = m/2.

    Uses ``kbar(R 3^{j-m}) <= K_kbar (m-j)^{-gamma}`` for j < m and
    ``kbar(R) <= K_kbar`` for j = m.
    """
    th, tau, g = state.theta, state.tau, state.gamma
    head = sum(th ** (j - 1) * (m - j) ** (-g) for j in range(1, m) if j <= m / 2)
    tail = sum(th ** (j - 1) for j in range(1, m) if j > m / 2)
    return th**m * state.omega0 + tau * K_kbar * (head + tail + th ** (m - 1))


def log_kbar(gamma: float, C: float = 1.0) -> Callable[[float], float]:
    """``rho -> C |log rho|^{-gamma}``."""
    def kbar(rho: float) -> float:
        return C * abs(math.log(rho)) ** (-gamma)

    return kbar


def kbar_from_coefficients(g_of_rho: Callable[[float], RadialProfile], r: float, n: int = 2,
                           tol: float = DEFAULT_TOL) -> Callable[[float], float]:
    """``rho -> ||g||^{1/n}_{(N_{r+eps'}),B_rho}``: the shrinking-ball constant
    when only the g-type inhomogeneity is present."""
    s = r + shrink_exponent(r)

    def kbar(rho: float) -> float:
        return luxemburg_norm(g_of_rho(rho), N_spec(n, s), BallDomain(n, rho), tol).value ** (1.0 / n)

    return kbar


def fit_constant(values: Sequence[float], radii: Sequence[float], gamma: float) -> float:
    """Smallest C with ``values_i <= C |log rho_i|^{-gamma}``."""
    return max(v * abs(math.log(rho)) ** gamma for v, rho in zip(values, radii))

