"""Relative-phase buildup between two condensates under atom counting."""

from ._becphase import (
    CondensateSpec,
    ConfigError,
    Distribution,
    ExperimentConfig,
    NumberStateVector,
    TrajectoryRangeError,
    conditional_visibility,
    falling_factorial_moment,
    filter_visibility,
    fit_fringe,
    lambda_visibility,
    log_spaced_ratios,
    run_ensemble,
    run_single,
    validate,
    visibility_curve,
    visibility_one_detection,
)

__all__ = [
    "CondensateSpec",
    "ConfigError",
    "Distribution",
    "ExperimentConfig",
    "NumberStateVector",
    "TrajectoryRangeError",
    "conditional_visibility",
    "falling_factorial_moment",
    "filter_visibility",
    "fit_fringe",
    "lambda_visibility",
    "log_spaced_ratios",
    "run_ensemble",
    "run_single",
    "validate",
    "visibility_curve",
    "visibility_one_detection",
]
