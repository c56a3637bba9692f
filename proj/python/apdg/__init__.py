"""Asymptotic-preserving DG solver for the kinetic semiconductor model."""

from ._core import (
    ConfigError,
    ExperimentConfig,
    Simulation,
    VelocityGrid,
    exact_limit_density,
    fit_loglog_slope,
    load_config,
    mixed_regime_epsilon,
    parse_config,
    prescribed_field,
    run_accuracy_study,
    run_ap_sweep,
    run_checks,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "Simulation",
    "VelocityGrid",
    "exact_limit_density",
    "fit_loglog_slope",
    "load_config",
    "mixed_regime_epsilon",
    "parse_config",
    "prescribed_field",
    "run_accuracy_study",
    "run_ap_sweep",
    "run_checks",
]
