"""Symmetric-decreasing rearrangement of grid functions on balls.

A sampled function is a list of values with the measure of the cell each
value stands for.  Sorting the values in decreasing order and stacking the
cells into concentric shells of the same measure gives the rearrangement as
a step profile, which is exact for piecewise-constant grid functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .profiles import BallDomain, RadialProfile, step


class SampleError(ValueError):
    pass


@dataclass(frozen=True)
class SampledFunction:
    ball: BallDomain
    values: np.ndarray
    weights: np.ndarray
    resolution: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if v.size == 0:
            raise SampleError("empty sample set")
        if v.shape != w.shape:
            raise SampleError("values and weights differ in length")
        if np.any(w < 0) or not np.all(np.isfinite(v)):
            raise SampleError("weights must be nonnegative and values finite")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)

    @property
    def total_measure(self) -> float:
        return float(self.weights.sum())

    @classmethod
    def from_radial(cls, f: Callable, ball: BallDomain, num: int = 20000) -> "SampledFunction":
        """Sample a radial function on ``num`` shells of equal measure.

        Each value is taken at the radius splitting its shell's measure in half.
        """
        if num < 1:
            raise SampleError("need at least one shell")
        k = np.arange(num)
        mid = ball.R * ((k + 0.5) / num) ** (1.0 / ball.n)
        w = np.full(num, ball.measure / num)
        return cls(ball, np.asarray(f(mid), dtype=float), w, ball.R / num ** (1.0 / ball.n))

    @classmethod
    def from_samples(cls, ball: BallDomain, radii, values) -> "SampledFunction":
        """Radial samples at increasing radii; sample i covers the shell up to
        the midpoint between radii i and i+1."""
        radii = np.asarray(radii, dtype=float)
        if radii.size == 0:
            raise SampleError("empty sample set")
        if np.any(radii <= 0) or np.any(radii > ball.R) or np.any(np.diff(radii) <= 0):
            raise SampleError("radii must be increasing within (0, R]")
        edges = np.concatenate([[0.0], 0.5 * (radii[1:] + radii[:-1]), [ball.R]])
        vol = ball.sigma / ball.n * np.diff(edges**ball.n)
        return cls(ball, values, vol, float(np.max(np.diff(edges))))

    @classmethod
    def from_cartesian(cls, f: Callable[[np.ndarray], np.ndarray], ball: BallDomain,
                       per_axis: int = 200) -> "SampledFunction":
        """Sample a general function ``f(points)`` (points of shape (m, n)) on
        the cells of a cube grid whose centres lie in the ball.

        Cell weights are rescaled so they add up to ``|B_R|`` exactly.
        """
        n, R = ball.n, ball.R
        h = 2.0 * R / per_axis
        axis = -R + h * (np.arange(per_axis) + 0.5)
        pts = np.array(list(itertools.product(axis, repeat=n)))
        inside = np.einsum("ij,ij->i", pts, pts) < R * R
        pts = pts[inside]
        w = np.full(pts.shape[0], ball.measure / pts.shape[0])
        return cls(ball, np.asarray(f(pts), dtype=float), w, h)


def distribution_function(f: SampledFunction, t: float) -> float:
    """Measure of ``{|f| > t}``."""
    if t < 0:
        raise SampleError("level must be nonnegative")
    return float(f.weights[np.abs(f.values) > t].sum())


def rearrange(f: SampledFunction) -> RadialProfile:
    """The symmetric-decreasing rearrangement of ``|f|`` as a step profile."""
    order = np.argsort(-np.abs(f.values), kind="stable")
    vals = np.abs(f.values)[order]
    cum = np.cumsum(f.weights[order])
    # scale so the outermost shell ends exactly on the sphere
    cum *= f.ball.measure / cum[-1]
    radii = (cum * f.ball.n / f.ball.sigma) ** (1.0 / f.ball.n)
    radii[-1] = f.ball.R
    # merge runs of equal values into a single shell
    last = np.concatenate([vals[1:] != vals[:-1], [True]])
    return step(radii[last], vals[last])


def level_radius(f: SampledFunction, t: float) -> float:
    """Radius of the ball with the measure of ``{|f| > t}``."""
    return f.ball.radius_of_measure(distribution_function(f, t))


def quantile_levels(f: SampledFunction, count: int = 50, rng: Optional[np.random.Generator] = None):
    """``count`` levels spread over the range of ``|f|`` (strictly inside it)."""
    v = np.abs(f.values)
    qs = np.linspace(0.01, 0.99, count) if rng is None else np.sort(rng.uniform(0.01, 0.99, count))
    return np.quantile(v, qs)


def distribution_gap(f: SampledFunction, g: RadialProfile, levels) -> float:
    """Largest difference of distribution functions of ``f`` and the radial ``g``."""
    sample = SampledFunction.from_radial(g, f.ball, max(f.values.size, 2000))
    gap = 0.0
    for t in levels:
        gap = max(gap, abs(distribution_function(f, t) - distribution_function(sample, t)))
    return gap
