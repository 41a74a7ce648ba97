import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orlicz_lab.counterexample import build_counterexample
from orlicz_lab.orlicz import M_spec, N_spec, exp_norm, luxemburg_norm
from orlicz_lab.profiles import BallDomain, step
from orlicz_lab.rearrangement import (SampledFunction, SampleError, distribution_function,
                                      distribution_gap, level_radius, quantile_levels, rearrange)

B1 = BallDomain(2, 1.0)


def annulus(x):
    return np.where(x > 0.5, 1.0, 0.0)


class TestDistribution:
    def test_constant(self):
        f = SampledFunction.from_radial(lambda x: np.ones_like(x), B1, 1000)
        assert distribution_function(f, 0.5) == pytest.approx(math.pi, rel=1e-14)
        assert distribution_function(f, 2.0) == 0.0

    def test_annulus(self):
        f = SampledFunction.from_radial(annulus, B1, 4000)
        assert distribution_function(f, 0.5) == pytest.approx(0.75 * math.pi, rel=1e-3)
        assert level_radius(f, 0.5) == pytest.approx(math.sqrt(3) / 2, rel=1e-3)

    def test_negative_level_rejected(self):
        f = SampledFunction.from_radial(annulus, B1, 10)
        with pytest.raises(SampleError):
            distribution_function(f, -1.0)


class TestRearrange:
    def test_constant_is_fixed(self):
        f = SampledFunction.from_radial(lambda x: np.full_like(x, 3.0), B1, 500)
        g = rearrange(f)
        np.testing.assert_array_equal(g(np.linspace(0, 1, 11)), 3.0)

    def test_annulus_becomes_ball(self):
        f = SampledFunction.from_cartesian(
            lambda p: np.where(np.hypot(p[:, 0], p[:, 1]) > 0.5, 1.0, 0.0), B1, 400)
        g = rearrange(f)
        assert g.interior_breakpoints[0] == pytest.approx(math.sqrt(3) / 2, abs=2e-3)
        assert g(0.8) == 1.0 and g(0.9) == 0.0

    def test_monotone_input_is_reproduced(self):
        u = build_counterexample(2, 0.1).u
        f = SampledFunction.from_radial(u, B1, 20000)
        g = rearrange(f)
        x = np.linspace(0.02, 0.98, 50)
        np.testing.assert_allclose(g(x), u(x), atol=5e-3)

    def test_invalid_samples(self):
        with pytest.raises(SampleError):
            SampledFunction(B1, np.array([]), np.array([]), 0.1)
        with pytest.raises(SampleError):
            SampledFunction.from_samples(B1, [0.5, 0.2], [1.0, 2.0])

    @given(st.integers(0, 10_000))
    def test_nonincreasing_and_equimeasurable(self, seed):
        rng = np.random.default_rng(seed)
        pts = np.sort(rng.uniform(0.01, 1.0, 300))
        vals = rng.normal(size=300)
        f = SampledFunction.from_samples(B1, np.unique(pts), vals[: np.unique(pts).size])
        g = rearrange(f)
        x = np.linspace(0, 1, 400)
        assert np.all(np.diff(g(x)) <= 0)
        # g is resampled on equal-measure shells, which costs a few shells of measure
        assert distribution_gap(f, g, quantile_levels(f, 50, rng)) <= 1e-2 * B1.measure

    def test_cartesian_equimeasurable(self):
        f = SampledFunction.from_cartesian(lambda p: np.sin(3 * p[:, 0]) + p[:, 1] ** 2, B1, 150)
        g = rearrange(f)
        gap = distribution_gap(f, g, quantile_levels(f, 50))
        assert gap <= 5 * f.resolution * 2 * math.pi

    def test_norms_preserved(self):
        f = SampledFunction.from_cartesian(
            lambda p: 1.0 + np.cos(2 * p[:, 0]) * np.abs(p[:, 1]), B1, 120)
        g = rearrange(f)
        # the scrambled radial arrangement of the same samples has identical norms
        perm = np.random.default_rng(3).permutation(f.values.size)
        w = f.weights[perm]
        radii = np.sqrt(np.cumsum(w) / math.pi)
        radii[-1] = 1.0
        scrambled = step(radii, np.abs(f.values[perm]))
        for spec in (N_spec(2, 1.0), M_spec(2, 1.0)):
            a = luxemburg_norm(g, spec, B1).value
            b = luxemburg_norm(scrambled, spec, B1).value
            assert a == pytest.approx(b, rel=1e-6)
        assert exp_norm(g, 2.0, B1).value == pytest.approx(exp_norm(scrambled, 2.0, B1).value,
                                                           rel=1e-6)
