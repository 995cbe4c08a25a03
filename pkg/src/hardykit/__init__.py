"""Numerical evaluation of weight conditions for weighted Hardy-type inequalities."""

__version__ = "0.1.0"

from .bilinear import BilinearContext, BilinearParams, bilinear_D, eval_A_tilde, evaluate_bilinear
from .config import RunConfig, load_run_config, parse_run_config
from .equivalence import EquivalenceReport, run_suite, sweep
from .errors import ConfigError, HardyKitError, NumericalError
from .estimator import EstimatorConfig, TestFunctionFamily, maximize_quotient
from .geomean import condition_scriptB, condition_scriptB_bilinear, geomean_T, limit_check_LHA
from .linear import LinearContext, LinearParams, evaluate_linear, muckenhoupt_AM
from .quadrature import QuadratureSettings, integrate, lower_tail, upper_tail
from .weights import Interval, Weight, parse_weight

__all__ = [
    "BilinearContext", "BilinearParams", "ConfigError", "EquivalenceReport", "EstimatorConfig",
    "HardyKitError", "Interval", "LinearContext", "LinearParams", "NumericalError", "QuadratureSettings",
    "RunConfig", "TestFunctionFamily", "Weight", "bilinear_D", "condition_scriptB",
    "condition_scriptB_bilinear", "eval_A_tilde", "evaluate_bilinear", "evaluate_linear", "geomean_T",
    "integrate", "limit_check_LHA", "load_run_config", "lower_tail", "maximize_quotient",
    "muckenhoupt_AM", "parse_run_config", "parse_weight", "run_suite", "sweep", "upper_tail",
]
