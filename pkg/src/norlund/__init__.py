"""Nörlund summation methods and finite-horizon inclusion diagnostics."""

from .inclusion import (
    InclusionMatrix,
    apply_inclusion_matrix,
    beta_estimate,
    classify_inclusion,
    epsilon_estimates,
    inclusion_matrix,
    kojima_schur_report,
    regularity_of_method,
    riesz_condition_one,
)
from .numerics import LimitConfig, LimitEstimate, detect_growth, detect_limit
from .transform import convolve, invert_mean, norlund_mean, solve_kernel
from .weights import WeightSequence, WeightSpec, generate_weights, parse_weight_spec

__all__ = [
    "InclusionMatrix",
    "LimitConfig",
    "LimitEstimate",
    "WeightSequence",
    "WeightSpec",
    "apply_inclusion_matrix",
    "beta_estimate",
    "classify_inclusion",
    "convolve",
    "detect_growth",
    "detect_limit",
    "epsilon_estimates",
    "generate_weights",
    "inclusion_matrix",
    "invert_mean",
    "kojima_schur_report",
    "norlund_mean",
    "parse_weight_spec",
    "regularity_of_method",
    "riesz_condition_one",
    "solve_kernel",
]
