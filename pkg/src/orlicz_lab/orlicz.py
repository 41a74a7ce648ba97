"""Orlicz functions and Luxemburg-type norms of radial functions on balls.

The family is the one attached to the L log^m L scale:

* ``N_s(t) = int_0^t log^{(n-1)/s}(tau + 1) dtau``
* ``M_s(t) = int_0^t (exp(tau^{s/(n-1)}) - 1) dtau`` (complementary to N_s)
* ``Phi(t) = exp(t^{s/(n-1)}) - 1`` (the exponential functional ``E_s``)
* the alternative N-norm ``inf_l l (1 + int N_s(|f|/l) dx)``.

Norms are found by expanding a bracket on the Luxemburg functional
``J(l) = int Phi(|f|/l) dx`` and closing it on the level set ``J = 1``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import roots_jacobi, roots_laguerre

from . import quadrature
from .profiles import BallDomain, RadialProfile

DEFAULT_TOL = 1e-8
_EXP_OVERFLOW = 709.0


class OrliczKind(enum.Enum):
    N_FUNCTION = "N"
    M_FUNCTION = "M"
    EXP_FUNCTIONAL = "E"
    ALT_N_NORM = "ALT"


class OrliczError(ValueError):
    pass


@dataclass(frozen=True)
class OrliczSpec:
    kind: OrliczKind
    n: int
    s: float

    def __post_init__(self):
        if not isinstance(self.kind, OrliczKind):
            object.__setattr__(self, "kind", OrliczKind(self.kind))
        if self.n < 2:
            raise OrliczError("dimension must be >= 2")
        if not self.s > 0:
            raise OrliczError("exponent parameter s must be positive")

    @property
    def log_power(self) -> float:
        """(n-1)/s, the power of the logarithm in N_s."""
        return (self.n - 1) / self.s

    @property
    def exp_power(self) -> float:
        """s/(n-1), the power inside the exponential of M_s and E_s."""
        return self.s / (self.n - 1)

    @property
    def is_convex(self) -> bool:
        if self.kind is OrliczKind.EXP_FUNCTIONAL:
            return self.s > self.n - 1
        return True

    def __call__(self, t):
        return eval_orlicz(self, t)

    def inverse(self, y: float) -> float:
        return orlicz_inverse(self, y)


def N_spec(n: int, s: float) -> OrliczSpec:
    return OrliczSpec(OrliczKind.N_FUNCTION, n, s)


def M_spec(n: int, s: float) -> OrliczSpec:
    return OrliczSpec(OrliczKind.M_FUNCTION, n, s)


def E_spec(n: int, s: float) -> OrliczSpec:
    return OrliczSpec(OrliczKind.EXP_FUNCTIONAL, n, s)


# -- pointwise evaluation ---------------------------------------------------

@functools.lru_cache(maxsize=64)
def _jacobi(k: int, beta: float):
    x, w = roots_jacobi(k, 0.0, beta)
    return (1.0 + x) / 2.0, w * 2.0 ** (-(beta + 1.0))


@functools.lru_cache(maxsize=8)
def _laguerre(k: int):
    return roots_laguerre(k)


def _nodes_for(L: float) -> int:
    for bound, k in ((46.0, 24), (100.0, 48), (220.0, 96), (460.0, 200)):
        if L <= bound:
            return k
    return 300


def _weighted_exp_integral(L: np.ndarray, beta: float, minus_one: bool) -> np.ndarray:
    """``int_0^1 y^beta g(L y) dy`` with g = exp or expm1, batched over L."""
    out = np.empty_like(L)
    ks = np.array([_nodes_for(v) for v in L]) if L.size < 64 else None
    if ks is None:
        ks = np.full(L.shape, 300)
        for bound, k in ((460.0, 200), (220.0, 96), (100.0, 48), (46.0, 24)):
            ks[L <= bound] = k
    for k in np.unique(ks):
        m = ks == k
        y, w = _jacobi(int(k), float(beta))
        arg = L[m, None] * y[None, :]
        vals = np.expm1(arg) if minus_one else np.exp(arg)
        out[m] = vals @ w
    return out


def _closed_form_N(t: np.ndarray, m: int) -> np.ndarray:
    # int_0^L w^m e^w dw = [e^w sum_k (-1)^(m-k) m!/k! w^k]_0^L
    L = np.log1p(t)
    acc = np.zeros_like(t)
    for k in range(m + 1):
        acc += (-1) ** (m - k) * math.factorial(m) / math.factorial(k) * L**k
    return (1.0 + t) * acc - (-1) ** m * math.factorial(m)


def _N(t: np.ndarray, m: float) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    if not np.any(pos):
        return out
    tp = t[pos]
    L = np.log1p(tp)
    res = np.empty_like(tp)
    small_int = float(m).is_integer() and 0 <= m <= 4
    closed = (L >= 0.5) & small_int
    if np.any(closed):
        res[closed] = _closed_form_N(tp[closed], int(m))
    rest = ~closed
    if np.any(rest):
        Lr = L[rest]
        # w = L y maps int_0^L w^m e^w dw onto a Gauss-Jacobi weight y^m
        with np.errstate(over="ignore"):
            res[rest] = np.exp((m + 1.0) * np.log(Lr)) * _weighted_exp_integral(Lr, m, False)
    out[pos] = res
    return out


def _M(t: np.ndarray, p: float) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    if not np.any(pos):
        return out
    tp = t[pos]
    with np.errstate(over="ignore", divide="ignore"):
        x = np.exp(p * np.log(tp))
    res = np.full_like(tp, np.inf)
    if p == 1.0:
        small = x < 1e-3
        xs = x[small]
        res[small] = xs**2 * (0.5 + xs * (1 / 6 + xs * (1 / 24 + xs / 120)))
        big = (~small) & (x < _EXP_OVERFLOW)
        res[big] = np.expm1(x[big]) - x[big]
    else:
        ok = x < _EXP_OVERFLOW
        a = 1.0 / p
        # M = (1/p) int_0^x u^(a-1) expm1(u) du = (1/p) x^a int_0^1 y^(a-1) expm1(x y) dy
        xo = x[ok]
        res[ok] = a * np.exp(a * np.log(xo)) * _weighted_exp_integral(xo, a - 1.0, True)
    out[pos] = res
    return out


def eval_orlicz(spec: OrliczSpec, t):
    """Evaluate N_s, M_s or the exponential Orlicz function at ``t >= 0``."""
    if spec.kind is OrliczKind.ALT_N_NORM:
        raise OrliczError("ALT_N_NORM is a norm recipe, not a pointwise function")
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise OrliczError("Orlicz functions are defined for t >= 0")
    if spec.kind is OrliczKind.N_FUNCTION:
        out = _N(arr, spec.log_power)
    elif spec.kind is OrliczKind.M_FUNCTION:
        out = _M(arr, spec.exp_power)
    else:
        out = _phi_exp(arr, spec.exp_power)
    return float(out[0]) if scalar else out


def _phi_exp(t: np.ndarray, p: float) -> np.ndarray:
    with np.errstate(over="ignore", divide="ignore"):
        x = np.where(t > 0, np.exp(p * np.log(np.where(t > 0, t, 1.0))), 0.0)
        return np.where(x < _EXP_OVERFLOW, np.expm1(np.minimum(x, _EXP_OVERFLOW)), np.inf)


def orlicz_inverse(spec: OrliczSpec, y: float) -> float:
    """Solve ``Phi(t) = y`` for t >= 0 (scalar root solve)."""
    if y < 0:
        raise OrliczError("inverse needs y >= 0")
    if y == 0:
        return 0.0
    if spec.kind is OrliczKind.EXP_FUNCTIONAL:
        return math.log1p(y) ** (1.0 / spec.exp_power)
    phi = functools.partial(eval_orlicz, spec)
    lo = hi = 1.0
    while phi(hi) < y:
        hi *= 2.0
    while phi(lo) >= y:
        lo *= 0.5
    if phi(lo) <= 0:
        raise OrliczError("inverse below representable range")
    lg = brentq(lambda z: math.log(phi(math.exp(z))) - math.log(y),
                math.log(lo), math.log(hi),
                xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(lg)


def constant_norm(c: float, spec: OrliczSpec, ball: BallDomain) -> float:
    """Closed form ``c / Phi^{-1}(1/|B|)`` for the norm of a constant."""
    if c == 0:
        return 0.0
    return abs(c) / orlicz_inverse(spec, 1.0 / ball.measure)


def majorization_constant(n: int, s: float) -> float:
    """Smallest C with ``M_s(t) <= exp(C t^{s/(n-1)}) - 1`` for all t > 0.

    Found by a log-grid scan followed by a bounded scalar refinement.
    """
    spec = M_spec(n, s)
    p = spec.exp_power

    def ratio(t):
        t = np.asarray(t, dtype=float)
        return np.log1p(eval_orlicz(spec, t)) / t**p

    ts = np.logspace(-3, math.log10((600.0) ** (1 / p)), 2000)
    r = ratio(ts)
    i = int(np.nanargmax(r))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
    best = minimize_scalar(lambda z: -float(ratio(math.exp(z))[()]),
                           bounds=(math.log(lo), math.log(hi)), method="bounded",
                           options={"xatol": 1e-12})
    return float(max(r[i], -best.fun))


# -- integration over balls -----------------------------------------------

def radial_integral(g: Union[RadialProfile, Callable], ball: BallDomain,
                    tol: float = 1e-10, breakpoints: Sequence[float] = (),
                    tail_exponent: Optional[float] = None, full: bool = False):
    """``sigma int_0^R g(rho) rho^{n-1} drho`` for a radial integrand.

    ``tail_exponent`` declares ``g ~ rho^{-c}`` (up to sub-power factors) at
    the origin; ``c >= n`` certifies divergence without integrating.
    Divergence is returned as ``inf``.
    """
    n, R = ball.n, ball.R
    if isinstance(g, RadialProfile):
        pts = tuple(breakpoints) + g.breaks_below(R)
        if tail_exponent is None and g.log_coefficient > 0:
            tail_exponent = 0.0
    else:
        pts = tuple(breakpoints)
    if tail_exponent is not None and tail_exponent >= n:
        res = quadrature.QuadResult(math.inf, math.inf, 0, False, True)
        return res if full else math.inf
    sigma = ball.sigma

    def integrand(rho):
        return g(rho) * rho ** (n - 1)

    res = quadrature.integrate(integrand, 0.0, R, rtol=tol, points=pts,
                               blowup=quadrature.BLOWUP / sigma)
    if full:
        return quadrature.QuadResult(sigma * res.value, sigma * res.error, res.intervals,
                                     res.converged, res.diverged)
    return sigma * res.value


# -- norms ------------------------------------------------------------------

@dataclass(frozen=True)
class NormResult:
    value: float
    bracket: tuple
    tol: float
    functional_at_value: float
    diagnostic: str = ""

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def __float__(self):
        return float(self.value)


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise OrliczError(f"tolerance must be positive, got {tol}")


def _tail_exponent(spec: OrliczSpec, alpha: float, lam: float) -> Optional[float]:
    """Power-law rate of Phi(alpha log(1/rho)/lam) at the origin."""
    if alpha <= 0:
        return None
    if spec.kind is OrliczKind.N_FUNCTION:
        return 0.0
    p = spec.exp_power
    if p > 1:
        return math.inf
    if p == 1:
        return alpha / lam
    return 0.0


def _is_zero(f: RadialProfile, R: float) -> bool:
    if f.log_coefficient > 0:
        return False
    return f.grid_sup(R) == 0.0


def solve_level(J: Callable[[float], float], lam0: float, tol: float,
                max_expand: int = 80):
    """Find the ``l`` with ``J(l) = 1`` for a nonincreasing functional J.

    Returns ``(lo, hi, J(hi), status)``: J(lo) > 1 >= J(hi) with
    ``hi - lo <= tol * hi``.  ``status`` is "ok", "zero" (J <= 1 down to the
    smallest scale) or "inf" (J > 1 at every scale tried).
    Steps alternate between false position on ``log J`` against ``log l``
    and plain bisection, so the bracket always shrinks.
    """
    lo, hi = lam0 * 1e-3, lam0 * 1e3
    j_hi = J(hi)
    k = 0
    while not j_hi <= 1.0:
        lo, hi = hi, hi * 10.0
        j_hi = J(hi)
        k += 1
        if k > max_expand:
            return math.inf, math.inf, j_hi, "inf"
    j_lo = J(lo)
    k = 0
    while j_lo <= 1.0:
        hi, j_hi = lo, j_lo
        lo = lo / 10.0
        j_lo = J(lo)
        k += 1
        if k > max_expand or lo < 1e-280:
            return 0.0, hi, j_hi, "zero"

    x_lo, x_hi = math.log(lo), math.log(hi)
    g_lo = math.log(j_lo) if math.isfinite(j_lo) else math.inf
    g_hi = math.log(j_hi) if j_hi > 0 else -math.inf

    def probe(x):
        nonlocal x_lo, x_hi, g_lo, g_hi, j_hi
        jx = J(math.exp(x))
        if jx <= 1.0:
            x_hi, j_hi = x, jx
            g_hi = math.log(jx) if jx > 0 else -math.inf
        else:
            x_lo = x
            g_lo = math.log(jx) if math.isfinite(jx) else math.inf

    bisect_next = False
    for _ in range(400):
        span = x_hi - x_lo
        # span is the relative bracket width to first order
        if math.expm1(span) <= tol and abs(j_hi - 1.0) <= tol:
            break
        if span <= 8 * np.finfo(float).eps * max(1.0, abs(x_hi)):
            break
        finite = math.isfinite(g_lo) and math.isfinite(g_hi)
        if bisect_next or not finite:
            probe(0.5 * (x_lo + x_hi))
            bisect_next = False
            continue
        slope = (g_hi - g_lo) / span
        xs = x_hi - g_hi / slope
        delta = 0.25 * tol / max(1.0, abs(slope))
        if span < 1e3 * tol:
            # straddle the secant estimate to close the bracket in two probes
            for x in (xs - delta, xs + delta):
                if x_lo < x < x_hi:
                    probe(x)
            bisect_next = (x_hi - x_lo) > 0.5 * span
            continue
        xs = min(max(xs, x_lo + 0.01 * span), x_hi - 0.01 * span)
        probe(xs)
        bisect_next = (x_hi - x_lo) > 0.5 * span
    return math.exp(x_lo), math.exp(x_hi), j_hi, "ok"


def _functional(f: RadialProfile, phi: Callable, ball: BallDomain, tol: float,
                tail: Callable[[float], Optional[float]]) -> Callable[[float], float]:
    af = f.abs() if not f.is_step else f.map(np.abs)

    def J(lam: float) -> float:
        def integrand(rho):
            return phi(af(rho) / lam)

        return radial_integral(integrand, ball, tol / 10.0,
                               breakpoints=f.breaks_below(ball.R), tail_exponent=tail(lam))

    return J


def luxemburg_norm(f: RadialProfile, spec: OrliczSpec, ball: BallDomain,
                   tol: float = DEFAULT_TOL) -> NormResult:
    """``inf{l > 0 : int_B Phi(|f|/l) dx <= 1}``."""
    _check_tol(tol)
    if spec.kind is OrliczKind.ALT_N_NORM:
        raise OrliczError("use alt_norm for the alternative N-norm")
    if f.radius < ball.R * (1 - 1e-14):
        raise OrliczError("profile does not cover the ball")
    if _is_zero(f, ball.R):
        return NormResult(0.0, (0.0, 0.0), tol, 0.0)
    alpha = f.log_coefficient
    if alpha > 0 and spec.kind is not OrliczKind.N_FUNCTION and spec.exp_power > 1:
        return NormResult(math.inf, (math.inf, math.inf), tol, math.inf,
                          "certified divergent: exp(c log^p(1/rho)) with p > 1")

    phi = functools.partial(eval_orlicz, spec)
    J = _functional(f, phi, ball, tol, lambda lam: _tail_exponent(spec, alpha, lam))
    est = f.grid_sup(ball.R)
    lam0 = est / orlicz_inverse(spec, 1.0 / ball.measure)
    lo, hi, j_hi, status = solve_level(J, lam0, tol)
    if status == "inf":
        return NormResult(math.inf, (math.inf, math.inf), tol, math.inf,
                          "functional divergent at every trial scale")
    if status == "zero":
        return NormResult(0.0, (0.0, hi), tol, j_hi, "functional <= 1 at all scales")
    return NormResult(hi, (lo, hi), tol, j_hi)


def exp_norm(f: RadialProfile, s: float, ball: BallDomain, tol: float = DEFAULT_TOL,
             via_substitution: bool = False) -> NormResult:
    """The exponential functional ``||f||_{E_s}``.

    With ``via_substitution`` the ball integral is rewritten, for a
    nonincreasing profile, as ``|B_R| int_0^inf (exp((w(t)/l)^p) - 1) e^{-t} dt``
    with ``w(t) = C_n f(R e^{-t/n})`` and ``C_n = (sigma n^{n-1})^{1/n}``.
    """
    spec = E_spec(ball.n, s)
    if not via_substitution:
        return luxemburg_norm(f, spec, ball, tol)
    _check_tol(tol)
    n, R = ball.n, ball.R
    if _is_zero(f, R):
        return NormResult(0.0, (0.0, 0.0), tol, 0.0)
    p = spec.exp_power
    alpha = f.log_coefficient
    if alpha > 0 and p > 1:
        return NormResult(math.inf, (math.inf, math.inf), tol, math.inf,
                          "certified divergent: exp(c t^p - t) with p > 1")
    grid = f.grid(2001, R)
    vals = np.abs(f(grid))
    if np.any(np.diff(vals) > 1e-12 * max(1.0, float(vals.max()))):
        raise OrliczError("substitution path needs a nonincreasing profile")
    cn = (ball.sigma * n ** (n - 1)) ** (1.0 / n)
    tcuts = [-n * math.log(b / R) for b in f.breaks_below(R)]
    wmax = cn * float(vals.max())
    measure = ball.measure

    def omega(t):
        return cn * np.abs(f(R * np.exp(-t / n)))

    def J(lam: float) -> float:
        if alpha > 0 and p == 1 and cn * alpha / (n * lam) >= 1:
            return math.inf

        def integrand(t):
            return _phi_exp(omega(t) / lam, p) * np.exp(-t)

        if alpha > 0:
            top = 40.0 / max(1.0 - (cn * alpha / (n * lam) if p == 1 else 0.0), 1e-3)
            top = min(max(top, 60.0), 2000.0)
        else:
            top = max(min((wmax / lam) ** p, _EXP_OVERFLOW), 0.0) + math.log(1e3 / tol) + 10.0
        res = quadrature.integrate(integrand, 0.0, top, rtol=tol / 10.0,
                                   points=[c for c in tcuts if c < top],
                                   blowup=quadrature.BLOWUP / measure)
        return measure * res.value

    lam0 = wmax / orlicz_inverse(spec, 1.0 / measure)
    lo, hi, j_hi, status = solve_level(J, lam0, tol)
    if status == "inf":
        return NormResult(math.inf, (math.inf, math.inf), tol, math.inf,
                          "functional divergent at every trial scale")
    if status == "zero":
        return NormResult(0.0, (0.0, hi / cn), tol, j_hi)
    return NormResult(hi / cn, (lo / cn, hi / cn), tol, j_hi)


def alt_norm(f: RadialProfile, s: float, ball: BallDomain,
             tol: float = DEFAULT_TOL) -> NormResult:
    """``inf_l l (1 + int_B N_s(|f|/l) dx)`` by golden-section search in log l."""
    _check_tol(tol)
    n = ball.n
    if not s > (n - 1) / n:
        raise OrliczError(f"alternative norm needs s > (n-1)/n = {(n - 1) / n}")
    if _is_zero(f, ball.R):
        return NormResult(0.0, (0.0, 0.0), tol, 0.0)
    spec = N_spec(n, s)
    J = _functional(f, functools.partial(eval_orlicz, spec), ball, tol, lambda lam: None)
    lux = luxemburg_norm(f, spec, ball, tol)
    if not lux.finite:
        return NormResult(math.inf, (math.inf, math.inf), tol, math.inf, lux.diagnostic)

    def F(x: float) -> float:
        lam = math.exp(x)
        return lam * (1.0 + J(lam))

    # the minimiser lies below 2L because F(l) >= l and F(L) = 2L
    a, b = math.log(lux.value) - math.log(1e3), math.log(2.0 * lux.value)
    while F(a) <= F(a + 0.05 * (b - a)):
        a -= 2.0
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = F(c), F(d)
    while (math.exp(b) - math.exp(a)) > tol * math.exp(b):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = F(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = F(d)
    x = c if fc <= fd else d
    val = min(fc, fd)
    return NormResult(val, (math.exp(a), math.exp(b)), tol, J(math.exp(x)),
                      f"minimiser lambda={math.exp(x):.12g}")


def lebesgue_norm(f: RadialProfile, p: float, ball: BallDomain,
                  tol: float = DEFAULT_TOL) -> float:
    """Standard L^p norm over the ball (``inf`` when the integral diverges)."""
    if not p >= 1:
        raise OrliczError("Lebesgue exponent must be >= 1")
    _check_tol(tol)
    af = f.abs()

    def integrand(rho):
        return af(rho) ** p

    tail = 0.0 if f.log_coefficient > 0 else None
    val = radial_integral(integrand, ball, tol / 10.0, breakpoints=f.breaks_below(ball.R),
                          tail_exponent=tail)
    if not math.isfinite(val):
        return math.inf
    return val ** (1.0 / p)


def sup_norm(f: RadialProfile, R: Optional[float] = None) -> float:
    """Grid supremum of |f| on the ball of radius R (inf for log-singular f)."""
    if f.log_coefficient > 0:
        return math.inf
    return f.grid_sup(R)
