"""Sampling expansions under matrix dilations.

Exact, differential, and ball-averaged (falsified) sampling expansions
``Q_j f = sum_k c_k phi(M^j . - k)`` for integer expansive dilation
matrices ``M``, with generator calibration against differential-operator
symbols and an empirical convergence-order harness.
"""
from .analysis import (
    ConvergenceReport,
    DeviationReport,
    RateFit,
    StudyPlan,
    convergence_study,
    deviation_study,
    fit_rate,
    lp_distance,
    lp_error,
    make_grid,
    predicted_rate,
    study_domain,
)
from .calibrate import (
    CalibrationError,
    CalibrationResult,
    flatness_residuals,
    solve_free_params,
)
from .config import ConfigError, ExperimentConfig, from_mapping, parse_config
from .diffop import (
    DiffOperator,
    apply_to_signal,
    apply_to_signal_many,
    ball_moments,
    ball_operator,
    delta_operator,
    symbol,
)
from .dilation import (
    Dilation,
    diagonal,
    dilation,
    dyadic,
    named_dilations,
    operator_norm,
    quincunx,
    triadic,
)
from .expansion import (
    Box,
    CoefficientRule,
    DifferentialRule,
    ExactRule,
    ExpansionResult,
    FalsifiedRule,
    MissingCoefficientError,
    ball_average,
    coefficients,
    deviation,
    deviation_many,
    evaluate,
    expand,
    lattice_support,
)
from .generators import (
    Generator,
    GeneratorFamily,
    bspline,
    bspline3_2d,
    bspline3_family,
    bspline4_1d,
    bspline4_family,
    bspline_fourier,
    fourier_derivative,
    hat,
    named_families,
    named_generators,
    sinc_squared,
    sinc_squared_twoscale,
    strang_fix_order,
    strang_fix_table,
)
from .multiindex import (
    choose,
    count_below,
    count_of_order,
    factorial,
    indices_below,
    indices_of_order,
    monomial,
    total_order,
)
from .signals import (
    Signal,
    gaussian,
    laplace1d,
    matern1d,
    named_signals,
    polynomial,
)
from .taylor import (
    chain_rule_derivatives,
    chain_rule_matrix,
    s_matrix,
    verify_taylor_recombination,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "CalibrationError",
    "CalibrationResult",
    "CoefficientRule",
    "ConfigError",
    "ConvergenceReport",
    "DeviationReport",
    "DiffOperator",
    "DifferentialRule",
    "Dilation",
    "ExactRule",
    "ExpansionResult",
    "ExperimentConfig",
    "FalsifiedRule",
    "Generator",
    "GeneratorFamily",
    "MissingCoefficientError",
    "RateFit",
    "Signal",
    "StudyPlan",
    "apply_to_signal",
    "apply_to_signal_many",
    "ball_average",
    "ball_moments",
    "ball_operator",
    "bspline",
    "bspline3_2d",
    "bspline3_family",
    "bspline4_1d",
    "bspline4_family",
    "bspline_fourier",
    "chain_rule_derivatives",
    "chain_rule_matrix",
    "choose",
    "coefficients",
    "convergence_study",
    "count_below",
    "count_of_order",
    "delta_operator",
    "deviation",
    "deviation_many",
    "deviation_study",
    "diagonal",
    "dilation",
    "dyadic",
    "evaluate",
    "expand",
    "factorial",
    "fit_rate",
    "flatness_residuals",
    "fourier_derivative",
    "from_mapping",
    "gaussian",
    "hat",
    "indices_below",
    "indices_of_order",
    "laplace1d",
    "lattice_support",
    "lp_distance",
    "lp_error",
    "make_grid",
    "matern1d",
    "monomial",
    "named_dilations",
    "named_families",
    "named_generators",
    "named_signals",
    "operator_norm",
    "parse_config",
    "polynomial",
    "predicted_rate",
    "quincunx",
    "s_matrix",
    "sinc_squared",
    "sinc_squared_twoscale",
    "solve_free_params",
    "strang_fix_order",
    "strang_fix_table",
    "study_domain",
    "symbol",
    "total_order",
    "triadic",
    "verify_taylor_recombination",
]
