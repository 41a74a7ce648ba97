"""The Harnack chain of norms and the dilation estimate for coefficients.

For ``u >= 0`` and ``u_bar = u + k + eps`` the chain is

    ||u||_{inf,R0} <= C ||u_bar||_{E_n,2R0} <= C ||u_bar||_{n/r,4R0}
        <= C ||u_bar^{-1}||^{-1}_{n/r,4R0} <= C ||u_bar^{-1}||^{-1}_{E_n,2R0}
        <= C inf_{B_R0} u_bar

and each link's constant is measured as the ratio of consecutive entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..orlicz import DEFAULT_TOL, N_spec, exp_norm, lebesgue_norm, luxemburg_norm
from ..profiles import BallDomain, RadialProfile
from .serrin import InequalityError

EPS_SHIFT = 1e-9

CHAIN_LABELS = (
    "sup_u_R0",
    "E_n_ubar_2R0",
    "L_n/r_ubar_4R0",
    "inv_L_n/r_ubar^-1_4R0",
    "inv_E_n_ubar^-1_2R0",
    "inf_ubar_R0",
)


@dataclass(frozen=True)
class ChainReport:
    R0: float
    r: float
    k: float
    eps: float
    quantities: tuple

    @property
    def ratios(self) -> tuple:
        """Measured constants of the five links."""
        q = self.quantities
        return tuple(a / b if b > 0 else math.inf for a, b in zip(q, q[1:]))

    @property
    def finite(self) -> bool:
        return all(math.isfinite(x) for x in self.quantities + self.ratios)

    @property
    def harnack_quotient(self) -> float:
        """``sup_{B_R0} u / (inf_{B_R0} u + k)``."""
        inf_u = self.quantities[-1] - self.k - self.eps
        return self.quantities[0] / (inf_u + self.k)

    @property
    def end_to_end(self) -> float:
        return math.prod(self.ratios)

    def as_dict(self) -> dict:
        return dict(zip(CHAIN_LABELS, self.quantities))


def harnack_chain(u: RadialProfile, R0: float, r: float, n: int = 2, k: float = 0.0,
                  eps: float = EPS_SHIFT, tol: float = DEFAULT_TOL) -> ChainReport:
    if u.radius < 8 * R0 * (1 - 1e-14):
        raise InequalityError("the profile must cover B_{8 R0}")
    if u.log_coefficient > 0:
        raise InequalityError("the chain needs a bounded profile")
    if u.grid_inf(8 * R0) < 0:
        raise InequalityError("the chain needs u >= 0")
    if not 0 < r < 1:
        raise InequalityError("need 0 < r < 1")
    ubar = u.shifted(k + eps)
    inv = ubar.power(-1.0)
    b1, b2, b4 = (BallDomain(n, m * R0) for m in (1, 2, 4))
    p = n / r
    q1 = u.abs().grid_sup(R0)
    q2 = exp_norm(ubar.restricted(b2.R), n, b2, tol).value
    q3 = lebesgue_norm(ubar.restricted(b4.R), p, b4, tol)
    q4 = 1.0 / lebesgue_norm(inv.restricted(b4.R), p, b4, tol)
    q5 = 1.0 / exp_norm(inv.restricted(b2.R), n, b2, tol).value
    q6 = ubar.grid_inf(b1.R)
    return ChainReport(R0, r, k, eps, (q1, q2, q3, q4, q5, q6))


def constant_chain_oracle(c: float, R0: float, r: float, n: int = 2, k: float = 0.0,
                          eps: float = EPS_SHIFT) -> tuple:
    """Closed-form chain for ``u = c``: pure measure factors."""
    cb = c + k + eps
    m2 = BallDomain(n, 2 * R0).measure
    m4 = BallDomain(n, 4 * R0).measure
    e = (n - 1) / n
    ell = math.log1p(1.0 / m2)
    return (abs(c), cb * ell ** (-e), cb * m4 ** (r / n), cb * m4 ** (-r / n),
            cb * ell**e, cb)


def eps_sensitivity(u: RadialProfile, R0: float, r: float, n: int = 2, k: float = 0.0,
                    tol: float = DEFAULT_TOL) -> float:
    """Largest relative change of a link constant between eps = 1e-8 and 1e-10."""
    a = harnack_chain(u, R0, r, n, k, 1e-8, tol).ratios
    b = harnack_chain(u, R0, r, n, k, 1e-10, tol).ratios
    return max(abs(x - y) / abs(y) for x, y in zip(a, b))


# -- dilation ---------------------------------------------------------------

@dataclass(frozen=True)
class DilationReport:
    lhs: float
    rhs: float
    rho: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-7)


def dilate(h: RadialProfile, R: float, R0: float, n: int) -> RadialProfile:
    """``h_hat(x) = rho^n h(rho x)`` with ``rho = R / R0``, on ``B_{8 R0}``."""
    rho = R / R0
    return h.dilated(rho, rho**n).restricted(8 * R0)


def dilation_check(h: RadialProfile, r: float, R: float, R0: float, n: int = 2,
                   tol: float = DEFAULT_TOL) -> DilationReport:
    """``||h_hat||_{(N_r),B_{8R0}}`` against ``||h||_{(N_r),B_{8R}}``."""
    if R > R0:
        raise InequalityError("dilation needs R <= R0")
    if h.radius < 8 * R * (1 - 1e-14):
        raise InequalityError("h must be defined on B_{8R}")
    spec = N_spec(n, r)
    h8 = h.restricted(8 * R)
    hh = dilate(h8, R, R0, n)
    lhs = luxemburg_norm(hh, spec, BallDomain(n, 8 * R0), tol).value
    rhs = luxemburg_norm(h8, spec, BallDomain(n, 8 * R), tol).value
    return DilationReport(lhs, rhs, R / R0)

