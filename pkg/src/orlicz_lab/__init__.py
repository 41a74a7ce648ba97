"""Orlicz norms of radial functions and numerical checks of regularity
estimates for ``-Delta_n u = V u^{n-1}`` on balls."""

from .counterexample import (CounterexampleSolution, SharpnessReport, build_counterexample,
                             sharpness_metrics, sweep)
from .orlicz import (DEFAULT_TOL, NormResult, OrliczError, OrliczKind, OrliczSpec, E_spec,
                     M_spec, N_spec, alt_norm, constant_norm, eval_orlicz, exp_norm,
                     lebesgue_norm, luxemburg_norm, orlicz_inverse, radial_integral, sup_norm)
from .pde import (CoefficientSet, PdeProblem, TestFunction, compute_k, n_laplacian,
                  strong_residual, structure_check, weak_residual)
from .profiles import BallDomain, ProfileError, RadialProfile
from .rearrangement import SampledFunction, distribution_function, rearrange

__version__ = "0.1.0"

__all__ = [
    "BallDomain", "CoefficientSet", "CounterexampleSolution", "DEFAULT_TOL", "E_spec",
    "M_spec", "N_spec", "NormResult", "OrliczError", "OrliczKind", "OrliczSpec", "PdeProblem",
    "ProfileError", "RadialProfile", "SampledFunction", "SharpnessReport", "TestFunction",
    "alt_norm", "build_counterexample", "compute_k", "constant_norm", "distribution_function",
    "eval_orlicz", "exp_norm", "lebesgue_norm", "luxemburg_norm", "n_laplacian",
    "orlicz_inverse", "radial_integral", "rearrange", "sharpness_metrics", "strong_residual",
    "structure_check", "sup_norm", "sweep", "weak_residual",
]
