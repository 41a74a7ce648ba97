"""Explicit bound for ``z^delta <= sum alpha_i z^{beta_i}``."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class InequalityError(ValueError):
    pass


def _validate(alphas, betas, delta):
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if alphas.shape != betas.shape or alphas.size == 0:
        raise InequalityError("alphas and betas must be nonempty and of equal length")
    if not delta > 0:
        raise InequalityError("delta must be positive")
    if np.any(alphas <= 0):
        raise InequalityError("alphas must be positive")
    if np.any(betas < 0) or np.any(betas >= delta):
        raise InequalityError("need 0 <= beta_i < delta")
    return alphas, betas


def serrin_constant(betas: Sequence[float], delta: float) -> float:
    """``C = max_i N^{gamma_i}`` with ``gamma_i = 1/(delta - beta_i)``.

    If the largest summand is ``alpha_I z^{beta_I}`` then
    ``z^{delta - beta_I} <= N alpha_I``, so ``z <= N^{gamma_I} alpha_I^{gamma_I}``.
    """
    betas = np.asarray(betas, dtype=float)
    gammas = 1.0 / (delta - betas)
    return float(np.max(betas.size ** gammas))


def serrin_bound(alphas: Sequence[float], betas: Sequence[float], delta: float) -> float:
    """Upper bound ``C sum alpha_i^{gamma_i}`` for every admissible z."""
    alphas, betas = _validate(alphas, betas, delta)
    gammas = 1.0 / (delta - betas)
    return serrin_constant(betas, delta) * float(np.sum(alphas**gammas))


def largest_admissible_z(alphas, betas, delta, upper: float, num: int = 200_001) -> float:
    """Brute-force scan for the largest z in (0, upper] with the hypothesis true."""
    alphas, betas = _validate(alphas, betas, delta)
    z = np.linspace(upper / num, upper, num)
    ok = z**delta <= np.sum(alphas[:, None] * z[None, :] ** betas[:, None], axis=0)
    return float(z[ok].max()) if np.any(ok) else 0.0


def quadratic_root(c0: float, c1: float) -> float:
    """Positive root of ``z^2 = c0 + c1 z``."""
    return 0.5 * (c1 + math.sqrt(c1 * c1 + 4.0 * c0))
