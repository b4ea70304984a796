"""Special functions, adaptive quadrature and a simplex minimizer."""

from .special import beta, log_beta, log_gamma, reg_inc_beta
from .quadrature import Interval, QuadratureResult, integrate
from .optimize import MinimizeResult, minimize

__all__ = [
    "Interval",
    "MinimizeResult",
    "QuadratureResult",
    "beta",
    "integrate",
    "log_beta",
    "log_gamma",
    "minimize",
    "reg_inc_beta",
]
