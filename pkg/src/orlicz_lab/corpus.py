"""Reusable function families for the inequality suites."""

from __future__ import annotations

import numpy as np

from .profiles import (C0, DISCONTINUOUS, RadialProfile, constant_piece, polynomial_cap,
                       power_piece, truncated_log)

LOG_LEVELS = tuple(np.round(np.linspace(0.5, 5.0, 10), 6))
CAPS = ((0.5, 1.0), (1.0, 1.5), (1.0, 2.0), (2.0, 2.0), (1.0, 3.0),
        (3.0, 2.5), (0.2, 4.0), (1.5, 1.2), (4.0, 2.0), (2.5, 5.0))


def w1n0_corpus(R: float = 1.0) -> list:
    """Twenty profiles vanishing on the sphere of radius R: ten truncated
    logarithms ``min(log(R/rho), L)`` and ten caps ``c(1 - (rho/R)^p)``."""
    out = [truncated_log(L, R) for L in LOG_LEVELS]
    out += [polynomial_cap(c, p, R) for c, p in CAPS]
    return out


def corpus_labels() -> list:
    return ([f"trunc_log(L={L:g})" for L in LOG_LEVELS]
            + [f"cap(c={c:g},p={p:g})" for c, p in CAPS])


def random_profile(rng: np.random.Generator, R: float = 1.0) -> RadialProfile:
    """A random bounded nonnegative profile: a power cap, a truncated log or a
    two-level step."""
    kind = rng.integers(3)
    if kind == 0:
        c = rng.uniform(0.1, 5.0)
        p = rng.uniform(0.5, 4.0)
        return RadialProfile((0.0, R), [power_piece(c + rng.uniform(0.0, 1.0), c / R**p, p)], C0)
    if kind == 1:
        return truncated_log(rng.uniform(0.2, 4.0), R)
    r0 = rng.uniform(0.1, 0.9) * R
    hi, lo = sorted(rng.uniform(0.0, 6.0, 2), reverse=True)
    return RadialProfile((0.0, r0, R), [constant_piece(hi), constant_piece(lo)], DISCONTINUOUS)
