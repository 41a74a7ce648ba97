"""Moser-Trudinger type bounds for ``W^{1,n}_0`` functions on balls and the
mean-value exponential product estimate.

For ``u`` vanishing on the sphere of ``B_R``:

* mode B:  ``||u||_{E_n} <= C_n^{-1} (|B_R| + 1)^{(n-1)/n} ||u_x||_n``,
  ``C_n = (sigma n^{n-1})^{1/n}``;
* mode A (0 < r < 1):  ``||u||_{E_{nr}} <= C_r^delta / C_n
  log(1 + |B_R|^{-1/(1-r)})^{-delta} ||u_x||_n`` with
  ``delta = (n-1)(1-r)/(nr)``, ``C_r = max(1, S^{r/(1-r)})`` and
  ``S = sum_{j>=1} Gamma(jr+1)^{1/r} / j!``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from ..orlicz import DEFAULT_TOL, exp_norm, lebesgue_norm, radial_integral
from ..profiles import BallDomain, RadialProfile
from .serrin import InequalityError

CALIBRATION_FILE = "calibration.json"


def gradient_norm(u: RadialProfile, ball: BallDomain, tol: float = DEFAULT_TOL) -> float:
    """``||u_x||_n`` over the ball."""
    return lebesgue_norm(u.restricted(ball.R).derivative_profile(), ball.n, ball, tol)


def mt_constant(n: int) -> float:
    """``C_n = (sigma n^{n-1})^{1/n}``."""
    return (BallDomain(n, 1.0).sigma * n ** (n - 1)) ** (1.0 / n)


# -- the series constant ---------------------------------------------------

@dataclass(frozen=True)
class SeriesSum:
    S: float
    terms: int
    tail_bound: float


def _log_term(j: np.ndarray, r: float) -> np.ndarray:
    return gammaln(j * r + 1.0) / r - gammaln(j + 1.0)


def series_S(r: float, tol: float = 1e-12, max_terms: int = 1_000_000) -> SeriesSum:
    """``S = sum_{j>=1} Gamma(jr+1)^{1/r}/j!`` with a geometric tail bound.

    The term ratio ``t_{j+1}/t_j`` decreases towards r (Stirling gives
    ``t_j ~ C j^{(1-r)/(2r)} r^j``), so once it is below 1 the tail after
    term J is at most ``t_{J+1} / (1 - t_{J+1}/t_J)``.
    """
    if not 0 < r < 1:
        raise InequalityError("the series constant needs 0 < r < 1")
    total, j0, chunk = 0.0, 1, 256
    while j0 < max_terms:
        j = np.arange(j0, j0 + chunk, dtype=float)
        logs = _log_term(np.concatenate([j, [j[-1] + 1]]), r)
        terms = np.exp(logs)
        ratios = np.exp(np.diff(logs))
        for i in range(chunk):
            total += terms[i]
            q = ratios[i]
            if q < 1.0:
                tail = terms[i + 1] / (1.0 - q)
                if tail < tol:
                    return SeriesSum(total, int(j[i]), tail)
        j0 += chunk
        chunk = min(chunk * 2, 65536)
    raise InequalityError("series did not reach the requested tolerance")


def compute_Cr(r: float, n: int = 2, tol: float = 1e-12) -> float:
    """``C_r = max(1, S^{r/(1-r)})``; the dimension does not enter."""
    if not 0 < r < 1:
        raise InequalityError("C_r is defined for 0 < r < 1")
    S = series_S(r, tol).S
    return max(1.0, S ** (r / (1.0 - r)))


# -- inequality checks ------------------------------------------------------

@dataclass(frozen=True)
class MTReport:
    mode: str
    lhs: float
    rhs: float
    grad_norm: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def mode_B_rhs(grad: float, ball: BallDomain) -> float:
    n = ball.n
    return (ball.measure + 1.0) ** ((n - 1) / n) * grad / mt_constant(n)


def mode_A_rhs(grad: float, ball: BallDomain, r: float, Cr: Optional[float] = None) -> float:
    n = ball.n
    delta = (n - 1) * (1 - r) / (n * r)
    Cr = compute_Cr(r, n) if Cr is None else Cr
    L = math.log1p(ball.measure ** (-1.0 / (1.0 - r)))
    return Cr**delta * L ** (-delta) * grad / mt_constant(n)


def mt_check(u: RadialProfile, ball: BallDomain, mode: str = "B", r: Optional[float] = None,
             tol: float = DEFAULT_TOL) -> MTReport:
    """Compare ``||u||_{E_n}`` (mode B) or ``||u||_{E_{nr}}`` (mode A) with the bound."""
    mode = mode.upper()
    if mode not in ("A", "B"):
        raise InequalityError("mode must be 'A' or 'B'")
    uR = u.restricted(ball.R)
    scale = max(1.0, uR.grid_sup())
    if abs(float(uR.one_sided(ball.R, "left"))) > 1e-12 * scale:
        raise InequalityError("u must vanish on the boundary sphere")
    grad = gradient_norm(uR, ball, tol)
    n = ball.n
    if mode == "B":
        lhs = exp_norm(uR, n, ball, tol).value
        return MTReport("B", lhs, mode_B_rhs(grad, ball), grad)
    if r is None or not 0 < r < 1:
        raise InequalityError("mode A needs 0 < r < 1")
    lhs = exp_norm(uR, n * r, ball, tol).value
    return MTReport(f"A(r={r:g})", lhs, mode_A_rhs(grad, ball, r), grad)


# -- mean-value exponential estimates ----------------------------------------

def mean_value(w: RadialProfile, ball: BallDomain, tol: float = 1e-10) -> float:
    return radial_integral(w.restricted(ball.R), ball, tol) / ball.measure


def exp_mean_integral(w: RadialProfile, ball: BallDomain, beta: float,
                      tol: float = 1e-10) -> float:
    """``int_B exp(beta |w - w_B|^{n/(n-1)}) dx`` for ``||w_x||_n`` normalised to 1."""
    n = ball.n
    wR = w.restricted(ball.R)
    T = gradient_norm(wR, ball)
    if T == 0:
        return ball.measure
    wb = mean_value(wR, ball, tol)

    def g(rho):
        return np.exp(beta * np.abs((wR(rho) - wb) / T) ** (n / (n - 1)))

    return radial_integral(g, ball, tol, breakpoints=wR.interior_breakpoints)


def fit_Cn(corpus: Sequence[RadialProfile], ball: BallDomain, beta: float) -> float:
    """Smallest C with the mean-value exponential bound ``<= C|B|`` on the corpus."""
    return max(exp_mean_integral(w, ball, beta) / ball.measure for w in corpus)


def beta_ceiling(n: int) -> float:
    """``alpha_n / 2^{1/(n-1)}`` with ``alpha_n = n sigma^{1/(n-1)}``."""
    sigma = BallDomain(n, 1.0).sigma
    return n * sigma ** (1.0 / (n - 1)) / 2 ** (1.0 / (n - 1))


def calibrate(n: int, corpus: Sequence[RadialProfile], ball: Optional[BallDomain] = None,
              cap: float = 4.0, grid: int = 40) -> dict:
    """Largest ``beta`` on a uniform grid up to :func:`beta_ceiling` whose
    corpus-fitted ``C_n`` does not exceed ``cap``."""
    ball = BallDomain(n, 1.0) if ball is None else ball
    top = beta_ceiling(n)
    best = None
    for beta in top * np.arange(1, grid + 1) / grid:
        cn = fit_Cn(corpus, ball, float(beta))
        if cn <= cap:
            best = {"beta_n": float(beta), "C_n": float(cn)}
        else:
            break
    if best is None:
        raise InequalityError("no admissible beta on the calibration grid")
    best.update({"n": n, "cap": cap, "grid": grid, "beta_ceiling": top})
    return best


@lru_cache(maxsize=None)
def load_calibration(n: int) -> dict:
    """Stored calibration for dimension n."""
    text = resources.files("orlicz_lab.data").joinpath(CALIBRATION_FILE).read_text()
    table = json.loads(text)
    try:
        return table["dimensions"][str(n)]
    except KeyError:
        raise InequalityError(f"no stored calibration for n={n}") from None


@dataclass(frozen=True)
class MeanProductReport:
    lhs: float
    rhs: float
    T: float
    C: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def mean_product_check(w: RadialProfile, ball: BallDomain, p: float, T: Optional[float] = None,
                       beta_n: Optional[float] = None, C_n: Optional[float] = None,
                       tol: float = 1e-10) -> MeanProductReport:
    """``int e^{pw/T} int e^{-pw/T}`` against ``(C_n + e^{(Tp)^n beta_n^{1-n}}) |B|^2``.

    ``T`` defaults to the measured gradient norm; it must dominate it.
    """
    n = ball.n
    wR = w.restricted(ball.R)
    grad = gradient_norm(wR, ball)
    if T is None:
        T = grad
    if grad > T * (1 + 1e-12):
        raise InequalityError("gradient bound ||w_x||_n <= T violated")
    if beta_n is None or C_n is None:
        cal = load_calibration(n)
        beta_n = cal["beta_n"] if beta_n is None else beta_n
        C_n = cal["C_n"] if C_n is None else C_n
    wb = mean_value(wR, ball, tol)
    bp = wR.interior_breakpoints
    if T == 0:
        lhs = ball.measure**2
    else:
        # centring at the mean leaves the product unchanged and avoids overflow
        plus = radial_integral(lambda x: np.exp(p * (wR(x) - wb) / T), ball, tol, breakpoints=bp)
        minus = radial_integral(lambda x: np.exp(-p * (wR(x) - wb) / T), ball, tol, breakpoints=bp)
        lhs = plus * minus
    C = C_n + math.exp((T * p) ** n * beta_n ** (1 - n))
    return MeanProductReport(lhs, C * ball.measure**2, T, C)


def corpus_reports(corpus: Iterable[RadialProfile], ball: BallDomain, mode: str = "B",
                   r: Optional[float] = None, tol: float = DEFAULT_TOL) -> list:
    return [mt_check(u, ball, mode, r, tol) for u in corpus]
