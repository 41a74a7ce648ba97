"""Balls and piecewise-smooth radial functions.

Every concrete function handled by the package (solutions, potentials,
cutoffs, test functions, coefficient profiles) is a :class:`RadialProfile`:
a list of breakpoints ``0 = r_0 < r_1 < ... < r_m = R`` and one vectorized
evaluator per interval, each carrying its first and second derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

Array = np.ndarray
Func = Callable[[Array], Array]

C0 = 0
C1 = 1
DISCONTINUOUS = -1

CONTINUITY_TOL = 1e-12


class ProfileError(ValueError):
    """Raised for malformed profiles or evaluation at forbidden points."""


@dataclass(frozen=True)
class BallDomain:
    """Ball of radius ``R`` in dimension ``n`` (centred at the origin)."""

    n: int
    R: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n}")
        if not self.R > 0:
            raise ValueError(f"radius must be positive, got {self.R}")

    @property
    def sigma(self) -> float:
        """Surface measure of the unit sphere, 2 pi^(n/2) / Gamma(n/2)."""
        return surface_constant(self.n)

    @property
    def measure(self) -> float:
        return self.sigma * self.R**self.n / self.n

    def with_radius(self, R: float) -> "BallDomain":
        return BallDomain(self.n, R)

    def radius_of_measure(self, m):
        """Radius of the concentric ball with measure ``m``."""
        return (self.n * np.asarray(m, dtype=float) / self.sigma) ** (1.0 / self.n)


def surface_constant(n: int) -> float:
    return float(2.0 * math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n)))


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Piece:
    f: Func
    df: Func = _zero
    d2f: Func = _zero
    label: str = "custom"


@dataclass(frozen=True)
class RadialProfile:
    """Piecewise-smooth radial function on ``[0, R]``.

    ``log_coefficient`` is the ``alpha`` in ``f(rho) = alpha log(1/rho) + O(1)``
    near the origin (0 for bounded profiles).  It drives the analytic
    divergence certificates in :mod:`orlicz_lab.orlicz`.
    """

    breakpoints: tuple
    pieces: tuple
    continuity: int = C0
    log_coefficient: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(bp) < 2 or bp[0] != 0.0:
            raise ProfileError("breakpoints must start at 0 and contain the radius")
        if any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
            raise ProfileError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bp) - 1:
            raise ProfileError("need exactly one piece per interval")
        if self.continuity not in (DISCONTINUOUS, C0, C1):
            raise ProfileError(f"unknown continuity class {self.continuity}")
        if self.log_coefficient < 0:
            raise ProfileError("log coefficient must be nonnegative")

    # -- geometry --------------------------------------------------------
    @property
    def radius(self) -> float:
        return self.breakpoints[-1]

    @property
    def interior_breakpoints(self) -> tuple:
        return self.breakpoints[1:-1]

    def breaks_below(self, R: float) -> tuple:
        return tuple(b for b in self.interior_breakpoints if b < R)

    # -- evaluation ------------------------------------------------------
    def _index(self, rho: Array) -> Array:
        idx = np.searchsorted(self.breakpoints, rho, side="right") - 1
        return np.clip(idx, 0, len(self.pieces) - 1)

    @property
    def is_step(self) -> bool:
        return "step_values" in self.meta

    def _dispatch(self, rho, which: str) -> Array:
        rho = np.asarray(rho, dtype=float)
        scalar = rho.ndim == 0
        r = np.atleast_1d(rho)
        idx = self._index(r)
        if self.is_step:
            out = self.meta["step_values"][idx] if which == "f" else np.zeros_like(r)
            return out[0] if scalar else out
        out = np.empty_like(r)
        for i, piece in enumerate(self.pieces):
            m = idx == i
            if np.any(m):
                out[m] = getattr(piece, which)(r[m])
        return out[0] if scalar else out

    def __call__(self, rho) -> Array:
        return self._dispatch(rho, "f")

    def derivative(self, rho) -> Array:
        return self._dispatch(rho, "df")

    def second_derivative(self, rho) -> Array:
        return self._dispatch(rho, "d2f")

    def one_sided(self, rho: float, side: str, order: int = 0) -> float:
        """Value (or derivative) at ``rho`` taken from the left or right piece."""
        which = ("f", "df", "d2f")[order]
        bp = self.breakpoints
        i = int(np.searchsorted(bp, rho, side="right") - 1)
        if side == "left" and rho in bp and i > 0:
            i -= 1
        i = min(max(i, 0), len(self.pieces) - 1)
        return float(getattr(self.pieces[i], which)(np.array([rho]))[0])

    def at_breakpoint(self, rho: float) -> bool:
        return any(abs(rho - b) <= 1e-14 * max(1.0, b) for b in self.interior_breakpoints)

    def grid(self, num: int = 4001, R: Optional[float] = None) -> Array:
        """Dense grid on (0, R] refined geometrically towards the origin."""
        R = self.radius if R is None else R
        lin = np.linspace(0.0, R, num)[1:]
        geo = R * np.logspace(-12, 0, num // 4)
        pts = np.concatenate([lin, geo, [b for b in self.interior_breakpoints if b <= R]])
        return np.unique(pts)

    def grid_sup(self, R: Optional[float] = None, num: int = 4001) -> float:
        return float(np.max(np.abs(self(self.grid(num, R)))))

    def grid_inf(self, R: Optional[float] = None, num: int = 4001) -> float:
        return float(np.min(self(self.grid(num, R))))

    def continuity_defects(self) -> list:
        """Jumps of value (and derivative for C1) at each interior breakpoint."""
        out = []
        for b in self.interior_breakpoints:
            jv = abs(self.one_sided(b, "left") - self.one_sided(b, "right"))
            jd = abs(self.one_sided(b, "left", 1) - self.one_sided(b, "right", 1))
            out.append((b, jv, jd))
        return out

    def check_continuity(self, tol: float = CONTINUITY_TOL) -> bool:
        if self.continuity == DISCONTINUOUS:
            return True
        for b, jv, jd in self.continuity_defects():
            scale_v = max(1.0, abs(self.one_sided(b, "right")))
            if jv > tol * scale_v:
                return False
            if self.continuity == C1:
                scale_d = max(1.0, abs(self.one_sided(b, "right", 1)))
                if jd > tol * scale_d:
                    return False
        return True

    # -- derived profiles ------------------------------------------------
    def map(self, g: Func, dg: Optional[Func] = None, d2g: Optional[Func] = None,
            log_coefficient: Optional[float] = None, continuity: Optional[int] = None,
            label: str = "map") -> "RadialProfile":
        """Pointwise composition ``g(f(rho))`` with chain-rule derivatives."""
        if self.is_step:
            return step(self.breakpoints[1:], g(self.meta["step_values"]))
        dg = dg or _zero
        d2g = d2g or _zero
        pieces = []
        for p in self.pieces:
            def f(x, p=p):
                return g(p.f(x))

            def df(x, p=p):
                return dg(p.f(x)) * p.df(x)

            def d2f(x, p=p):
                y = p.f(x)
                return d2g(y) * p.df(x) ** 2 + dg(y) * p.d2f(x)

            pieces.append(Piece(f, df, d2f, label))
        return RadialProfile(
            self.breakpoints, pieces,
            self.continuity if continuity is None else continuity,
            self.log_coefficient if log_coefficient is None else log_coefficient,
        )

    def scaled(self, c: float) -> "RadialProfile":
        c = float(c)
        return self.map(lambda y: c * y, lambda y: c + 0.0 * y, _zero,
                        log_coefficient=abs(c) * self.log_coefficient, label="scaled")

    def shifted(self, c: float) -> "RadialProfile":
        c = float(c)
        return self.map(lambda y: y + c, lambda y: 1.0 + 0.0 * y, _zero, label="shifted")

    def power(self, q: float) -> "RadialProfile":
        """``f**q`` for a positive profile (q may be negative)."""
        q = float(q)
        if self.log_coefficient > 0 and q < 0:
            alpha = 0.0
        else:
            alpha = self.log_coefficient * max(q, 0.0)
        return self.map(lambda y: y**q, lambda y: q * y ** (q - 1),
                        lambda y: q * (q - 1) * y ** (q - 2),
                        log_coefficient=alpha, label="power")

    def abs(self) -> "RadialProfile":
        return self.map(np.abs, np.sign, _zero, label="abs")

    def derivative_profile(self) -> "RadialProfile":
        """The profile ``rho -> f'(rho)`` (second derivative carried over)."""
        pieces = [Piece(p.df, p.d2f, _zero, "derivative") for p in self.pieces]
        return RadialProfile(self.breakpoints, pieces, DISCONTINUOUS, 0.0)

    def restricted(self, R: float) -> "RadialProfile":
        """Same function on the smaller interval ``[0, R]``."""
        if not 0 < R <= self.radius * (1 + 1e-15):
            raise ProfileError(f"cannot restrict a profile of radius {self.radius} to {R}")
        keep = [b for b in self.breakpoints if b < R]
        bp = keep + [R]
        if self.is_step:
            return step(bp[1:], self.meta["step_values"][: len(bp) - 1])
        return RadialProfile(bp, self.pieces[: len(bp) - 1], self.continuity,
                             self.log_coefficient)

    def dilated(self, rho: float, factor: float = 1.0) -> "RadialProfile":
        """``x -> factor * f(rho x)`` on the ball of radius ``R / rho``."""
        rho, factor = float(rho), float(factor)
        if self.is_step:
            return step(np.asarray(self.breakpoints[1:]) / rho,
                        factor * self.meta["step_values"])
        pieces = [
            Piece(lambda x, p=p: factor * p.f(rho * x),
                  lambda x, p=p: factor * rho * p.df(rho * x),
                  lambda x, p=p: factor * rho**2 * p.d2f(rho * x), "dilated")
            for p in self.pieces
        ]
        bp = [b / rho for b in self.breakpoints]
        return RadialProfile(bp, pieces, self.continuity, abs(factor) * self.log_coefficient)

    def combine(self, other: "RadialProfile", op: Callable[[Array, Array], Array],
                label: str = "combine") -> "RadialProfile":
        """Pointwise binary operation; derivatives are not propagated."""
        R = min(self.radius, other.radius)
        bp = sorted({0.0, R, *self.breaks_below(R), *other.breaks_below(R)})
        pieces = [Piece(lambda x: op(self(x), other(x)), label=label)] * (len(bp) - 1)
        return RadialProfile(bp, pieces, DISCONTINUOUS,
                             self.log_coefficient + other.log_coefficient)


# -- constructors ---------------------------------------------------------

def constant(c: float, R: float = 1.0) -> RadialProfile:
    c = float(c)
    return RadialProfile((0.0, R), [Piece(lambda x: np.full_like(x, c, dtype=float),
                                          _zero, _zero, "constant")], C1)


def power_piece(a: float, b: float, p: float) -> Piece:
    """``a - b rho^p``."""
    a, b, p = float(a), float(b), float(p)
    return Piece(
        lambda x: a - b * x**p,
        lambda x: -b * p * x ** (p - 1),
        lambda x: -b * p * (p - 1) * x ** (p - 2),
        "power",
    )


def log_piece(alpha: float, c: float = 0.0) -> Piece:
    """``alpha log(1/rho) + c``."""
    alpha, c = float(alpha), float(c)
    with np.errstate(divide="ignore"):
        return Piece(
            lambda x: c - alpha * np.log(x),
            lambda x: -alpha / x,
            lambda x: alpha / x**2,
            "log",
        )


def constant_piece(c: float) -> Piece:
    c = float(c)
    return Piece(lambda x: np.full_like(x, c, dtype=float), _zero, _zero, "constant")


def power(a: float, b: float, p: float, R: float = 1.0) -> RadialProfile:
    return RadialProfile((0.0, R), [power_piece(a, b, p)], C1)


def log_profile(alpha: float = 1.0, R: float = 1.0, c: float = 0.0) -> RadialProfile:
    return RadialProfile((0.0, R), [log_piece(alpha, c)], C1, log_coefficient=float(alpha))


def truncated_log(L: float, R: float = 1.0) -> RadialProfile:
    """``min(log(R/rho), L)``: a W^{1,n}_0 function on the ball of radius R."""
    r0 = R * math.exp(-L)
    return RadialProfile((0.0, r0, R), [constant_piece(L), log_piece(1.0, math.log(R))], C0)


def polynomial_cap(c: float, p: float, R: float = 1.0) -> RadialProfile:
    """``c (1 - (rho/R)^p)``, vanishing on the boundary sphere."""
    return RadialProfile((0.0, R), [power_piece(c, c / R**p, p)], C1)


def smoothstep_cutoff(inner: float, outer: float, R: Optional[float] = None) -> RadialProfile:
    """C1 cutoff: 1 on [0, inner], 0 on [outer, R], cubic in between.

    The slope never exceeds ``1.5 / (outer - inner)``.
    """
    R = outer if R is None else R
    w = outer - inner
    if not 0 < inner < outer <= R:
        raise ProfileError("cutoff needs 0 < inner < outer <= R")

    def f(x):
        s = (x - inner) / w
        return 1.0 - (3 * s**2 - 2 * s**3)

    def df(x):
        s = (x - inner) / w
        return -(6 * s - 6 * s**2) / w

    def d2f(x):
        s = (x - inner) / w
        return -(6 - 12 * s) / w**2

    pieces = [constant_piece(1.0), Piece(f, df, d2f, "cutoff")]
    bp = [0.0, inner, outer]
    if outer < R:
        pieces.append(constant_piece(0.0))
        bp.append(R)
    return RadialProfile(bp, pieces, C1)


def bump(lo: float, hi: float, R: float = 1.0, height: float = 1.0) -> RadialProfile:
    """C1 bump ``height * s^2 (1-s)^2 * 16`` supported on ``[lo, hi]``.

    Both the value and the derivative vanish at ``lo`` and ``hi``.
    """
    if not 0 <= lo < hi <= R:
        raise ProfileError("bump support must satisfy 0 <= lo < hi <= R")
    w = hi - lo
    h = 16.0 * float(height)

    def f(x):
        s = (x - lo) / w
        return h * s**2 * (1 - s) ** 2

    def df(x):
        s = (x - lo) / w
        return h * (2 * s * (1 - s) ** 2 - 2 * s**2 * (1 - s)) / w

    def d2f(x):
        s = (x - lo) / w
        return h * (2 * (1 - s) ** 2 - 8 * s * (1 - s) + 2 * s**2) / w**2

    pieces, bp = [], [0.0]
    if lo > 0:
        pieces.append(constant_piece(0.0))
        bp.append(lo)
    pieces.append(Piece(f, df, d2f, "bump"))
    bp.append(hi)
    if hi < R:
        pieces.append(constant_piece(0.0))
        bp.append(R)
    return RadialProfile(bp, pieces, C1)


def from_callables(f: Func, R: float, df: Optional[Func] = None,
                   d2f: Optional[Func] = None, breakpoints: Sequence[float] = (),
                   continuity: int = C0, log_coefficient: float = 0.0) -> RadialProfile:
    """Wrap plain callables; missing derivatives fall back to central differences."""
    if df is None:
        h = 1e-6

        def df(x):
            return (f(x + h) - f(x - h)) / (2 * h)
    if d2f is None:
        h2 = 1e-4

        def d2f(x):
            return (df(x + h2) - df(x - h2)) / (2 * h2)
    bp = [0.0, *sorted(b for b in breakpoints if 0 < b < R), R]
    piece = Piece(f, df, d2f, "callable")
    return RadialProfile(bp, [piece] * (len(bp) - 1), continuity, log_coefficient)


def step(radii: Sequence[float], values: Sequence[float]) -> RadialProfile:
    """Step function: ``values[i]`` on ``[radii[i-1], radii[i])`` with radii[-1] = R."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.size != values.size or radii.size == 0:
        raise ProfileError("step profile needs one value per outer radius")
    edges = np.concatenate([[0.0], radii])
    keep = np.concatenate([[True], np.diff(edges) > 0])[1:]
    radii, values = radii[keep], values[keep]
    edges = np.concatenate([[0.0], radii])
    # the per-interval pieces are never called: evaluation goes through the
    # value table, but one piece per interval keeps quadrature splits at the jumps
    pieces = [_STEP_PIECE] * values.size
    return RadialProfile(edges, pieces, DISCONTINUOUS, meta={"step_values": values.copy()})


_STEP_PIECE = Piece(_zero, label="step")
