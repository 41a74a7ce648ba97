"""The radial n-Laplacian, residuals of ``-Delta_n u = V u^{n-1}``, the
structure inequalities and the inhomogeneity constant ``k``.

Sign convention.  The model flux is ``A(x, u, p) = |p|^{n-2} p`` and the
source ``B(x, u, p) = -V u |u|^{n-2}``, so that ``div A = B`` reads
``-Delta_n u = V u |u|^{n-2}``.  The weak form against a test function
``phi`` is therefore

    int phi_x . A + phi B dx = int phi' |u'|^{n-2} u' - phi V u |u|^{n-2} dx = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .orlicz import DEFAULT_TOL, N_spec, luxemburg_norm, radial_integral
from .profiles import BallDomain, RadialProfile, constant

FD_STEP = 1e-5


class PdeError(ValueError):
    pass


def _zero_profile(R: float) -> RadialProfile:
    return constant(0.0, R)


@dataclass(frozen=True)
class PdeProblem:
    u: RadialProfile
    V: Optional[RadialProfile] = None
    n: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise PdeError("dimension must be >= 2")
        if self.V is None:
            object.__setattr__(self, "V", _zero_profile(self.u.radius))

    @property
    def radius(self) -> float:
        return min(self.u.radius, self.V.radius)

    @property
    def breakpoints(self) -> tuple:
        return tuple(sorted(set(self.u.interior_breakpoints) | set(self.V.interior_breakpoints)))

    def flux(self, rho) -> np.ndarray:
        p = self.u.derivative(rho)
        return np.abs(p) ** (self.n - 2) * p

    def source(self, rho) -> np.ndarray:
        u = self.u(rho)
        return -self.V(rho) * u * np.abs(u) ** (self.n - 2)


@dataclass(frozen=True)
class TestFunction:
    """A C1 radial test function vanishing, with its derivative, near the sphere."""

    phi: RadialProfile
    support: tuple

    def __post_init__(self):
        lo, hi = self.support
        R = self.phi.radius
        if not 0 <= lo < hi < R:
            raise PdeError("test function support must lie inside the open ball")
        tail = np.linspace(hi, R, 64)
        if np.max(np.abs(self.phi(tail))) > 1e-14 or np.max(np.abs(self.phi.derivative(tail))) > 1e-12:
            raise PdeError("test function is not compactly supported in the ball")

    @classmethod
    def bump(cls, lo: float, hi: float, R: float = 1.0, height: float = 1.0) -> "TestFunction":
        from .profiles import bump

        return cls(bump(lo, hi, R, height), (lo, hi))

    def scaled(self, c: float) -> "TestFunction":
        return TestFunction(self.phi.scaled(c), self.support)


@dataclass
class CoefficientSet:
    """Structure coefficients; missing profiles are identically zero."""

    n: int
    r: float
    a: float = 1.0
    b: Optional[RadialProfile] = None
    c: Optional[RadialProfile] = None
    d: Optional[RadialProfile] = None
    e: Optional[RadialProfile] = None
    f: Optional[RadialProfile] = None
    g: Optional[RadialProfile] = None
    R: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise PdeError("the flux constant a must be positive")
        for name in "bcdefg":
            prof = getattr(self, name)
            if prof is None:
                setattr(self, name, _zero_profile(self.R))
            elif prof.grid_inf() < 0:
                raise PdeError(f"coefficient {name} must be nonnegative")

    @classmethod
    def model(cls, problem: PdeProblem, r: float) -> "CoefficientSet":
        """Coefficients of the model equation: a = 1, d = V, the rest zero."""
        return cls(problem.n, r, 1.0, d=problem.V, R=problem.radius)

    def is_homogeneous(self) -> bool:
        return all(getattr(self, x).grid_sup() == 0.0 for x in "efg")


# -- operator -------------------------------------------------------------

def n_laplacian(u: RadialProfile, n: int, rho, allow_breakpoint: bool = False):
    """``(n-1)|u'|^{n-2}(u'' + u'/rho)``, the radial form of div(|grad u|^{n-2} grad u)."""
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    if not allow_breakpoint and any(u.at_breakpoint(float(x)) for x in rho_arr):
        raise PdeError("n-Laplacian requested at a breakpoint; use one-sided values")
    if np.any(rho_arr <= 0):
        raise PdeError("the radial formula needs rho > 0")
    d1 = u.derivative(rho_arr)
    d2 = u.second_derivative(rho_arr)
    out = (n - 1) * np.abs(d1) ** (n - 2) * (d2 + d1 / rho_arr)
    return out[0] if np.ndim(rho) == 0 else out


def n_laplacian_one_sided(u: RadialProfile, n: int, rho: float, side: str) -> float:
    d1 = u.one_sided(rho, side, 1)
    d2 = u.one_sided(rho, side, 2)
    return (n - 1) * abs(d1) ** (n - 2) * (d2 + d1 / rho)


def n_laplacian_fd(u, n: int, rho, h: float = FD_STEP):
    """Divergence-form finite differences: rho^{1-n} d/drho(rho^{n-1}|u'|^{n-2}u').

    Uses only values of ``u`` (any callable), so it is independent of the
    analytic derivatives carried by a profile.
    """
    rho = np.asarray(rho, dtype=float)

    def F(x):
        D = (u(x + h / 2) - u(x - h / 2)) / h
        return x ** (n - 1) * np.abs(D) ** (n - 2) * D

    return rho ** (1 - n) * (F(rho + h / 2) - F(rho - h / 2)) / h


# -- residuals ------------------------------------------------------------

def residual_grid(problem: PdeProblem, num: int = 10_000) -> np.ndarray:
    """``num`` points in (0, R) avoiding every breakpoint."""
    R = problem.radius
    pts = np.linspace(0.0, R, num + 2)[1:-1]
    bad = np.zeros(pts.shape, dtype=bool)
    for b in problem.breakpoints:
        bad |= np.abs(pts - b) <= 1e-12 * max(1.0, b)
    return pts[~bad]


def strong_residual(problem: PdeProblem, grid: Optional[Sequence[float]] = None) -> float:
    """``max |-Delta_n u - V u |u|^{n-2}|`` over the grid."""
    pts = residual_grid(problem) if grid is None else np.asarray(grid, dtype=float)
    lap = n_laplacian(problem.u, problem.n, pts)
    res = -lap + problem.source(pts)
    return float(np.max(np.abs(res)))


@dataclass(frozen=True)
class WeakResidual:
    value: float
    flux_term: float
    source_term: float

    @property
    def scale(self) -> float:
        return max(abs(self.flux_term), abs(self.source_term))


def weak_residual_terms(problem: PdeProblem, phi: TestFunction,
                        tol: float = 1e-10) -> WeakResidual:
    n = problem.n
    ball = BallDomain(n, problem.radius)
    pts = tuple(sorted(set(problem.breakpoints) | set(phi.phi.interior_breakpoints)))
    lo, hi = phi.support

    def flux_part(rho):
        inside = (rho > lo) & (rho < hi)
        return np.where(inside, phi.phi.derivative(rho) * problem.flux(rho), 0.0)

    def source_part(rho):
        inside = (rho > lo) & (rho < hi)
        return np.where(inside, phi.phi(rho) * problem.source(rho), 0.0)

    A = radial_integral(flux_part, ball, tol, breakpoints=pts)
    B = radial_integral(source_part, ball, tol, breakpoints=pts)
    return WeakResidual(A + B, A, B)


def weak_residual(problem: PdeProblem, phi: TestFunction, tol: float = 1e-10) -> float:
    """``int (phi' |u'|^{n-2} u' - phi V u^{n-1}) dx``; zero for a weak solution."""
    return weak_residual_terms(problem, phi, tol).value


# -- structure conditions -------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    flux_margin: float
    source_margin: float
    coercive_margin: float
    worst_points: tuple
    samples: int

    @property
    def ok(self) -> bool:
        return min(self.flux_margin, self.source_margin, self.coercive_margin) >= 0.0

    def margins(self) -> dict:
        return {"flux": self.flux_margin, "source": self.source_margin,
                "coercive": self.coercive_margin}


def _margin(big, small):
    """``big - small`` with differences at rounding level reported as 0."""
    m = big - small
    noise = 1e-12 * np.maximum(np.abs(big), np.abs(small))
    return np.where(np.abs(m) <= noise, 0.0, m)


def structure_check(coeffs: CoefficientSet, problem: PdeProblem,
                    sample_points: Optional[Sequence[float]] = None) -> StructureReport:
    """Worst margins of the three growth/coercivity inequalities.

        |A| <= a|p|^{n-1} + b|u|^{n-1} + e
        |B| <= c|p|^{n-1} + d|u|^{n-1} + f
        p.A >= |p|^n - d|u|^n - g
    """
    n = problem.n
    pts = residual_grid(problem, 2000) if sample_points is None else np.asarray(sample_points, float)
    u = problem.u(pts)
    p = problem.u.derivative(pts)
    A = problem.flux(pts)
    B = problem.source(pts)
    au, ap = np.abs(u), np.abs(p)
    cf = {k: getattr(coeffs, k)(pts) for k in "bcdefg"}
    m1 = _margin(coeffs.a * ap ** (n - 1) + cf["b"] * au ** (n - 1) + cf["e"], np.abs(A))
    m2 = _margin(cf["c"] * ap ** (n - 1) + cf["d"] * au ** (n - 1) + cf["f"], np.abs(B))
    m3 = _margin(p * A, ap**n - cf["d"] * au**n - cf["g"])
    worst = tuple(float(pts[np.argmin(m)]) for m in (m1, m2, m3))
    return StructureReport(float(m1.min()), float(m2.min()), float(m3.min()), worst, pts.size)


# -- the constant k -------------------------------------------------------

def compute_k(coeffs: CoefficientSet, ball: BallDomain, s_exponent: Optional[float] = None,
              tol: float = DEFAULT_TOL) -> float:
    """``(||e^{n/(n-1)}||^{(n-1)/n} + ||f||)^{1/(n-1)} + ||g||^{1/n}`` in ``(N_s)``.

    ``s_exponent`` defaults to ``coeffs.r``; pass ``r + eps'`` for the
    shrinking-ball variant.
    """
    n = ball.n
    s = coeffs.r if s_exponent is None else s_exponent
    spec = N_spec(n, s)

    def norm(prof: RadialProfile) -> float:
        return luxemburg_norm(prof.restricted(ball.R), spec, ball, tol).value

    q = n / (n - 1)
    e_pow = coeffs.e.map(lambda y: np.abs(y) ** q)
    ne, nf, ng = norm(e_pow), norm(coeffs.f), norm(coeffs.g)
    if not all(math.isfinite(x) for x in (ne, nf, ng)):
        return math.inf
    return (ne ** ((n - 1) / n) + nf) ** (1.0 / (n - 1)) + ng ** (1.0 / n)


def fit_log_decay(values: Sequence[float], radii: Sequence[float], gamma: float) -> float:
    """Smallest C with ``values_i <= C |log rho_i|^{-gamma}``."""
    return max(v * abs(math.log(r)) ** gamma for v, r in zip(values, radii))
