"""Numerical checks of the inequality machinery behind the regularity estimates."""

from .continuity import OscillationState, oscillation_recursion, shrink_check
from .harnack import dilation_check, harnack_chain
from .iteration import (IterationSchedule, TruncationSpec, energy_inequality_check,
                        exp_limit_check, moser_trace)
from .moser_trudinger import compute_Cr, mean_product_check, mt_check
from .serrin import InequalityError, serrin_bound

__all__ = [
    "InequalityError", "IterationSchedule", "OscillationState", "TruncationSpec",
    "compute_Cr", "dilation_check", "energy_inequality_check", "exp_limit_check",
    "harnack_chain", "mean_product_check", "moser_trace", "mt_check",
    "oscillation_recursion", "serrin_bound", "shrink_check",
]
