"""Numerical verification of sharp bilinear estimates for the half-wave propagator.

Submodules: numerics (special functions and quadrature), model (settings and
data), constants (closed-form sharp constants), geometry (Lorentz boosts and
delta-constrained integrals), functionals (I_beta, T_beta, H_lambda and the
space-time norms), experiments (verification suites) and cli.
"""
from .errors import AccuracyError, DegenerateConfigurationError, DomainError, UnsupportedDataError
from .functionals import SignMode
from .model import ExtremiserParams, RadialData, Setting, preset

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DegenerateConfigurationError",
    "DomainError",
    "ExtremiserParams",
    "RadialData",
    "Setting",
    "SignMode",
    "UnsupportedDataError",
    "preset",
]
