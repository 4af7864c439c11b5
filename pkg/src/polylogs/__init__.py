"""Multiple-precision polylogarithms on C - {0, 1}: analytic continuation,
monodromy, single-valued variants, iterated integrals, the polylogarithm
Lie algebra, Heisenberg regulators and ideal hyperbolic volumes.
"""

from __future__ import annotations

from .errors import (
    ArgumentError,
    DegenerateConfigurationError,
    DiscontinuityError,
    DomainError,
    InvariantViolation,
    NonConvergenceError,
    ParseError,
    PolylogError,
    PrecisionTooLowError,
    SingularityError,
    SingularityProximityWarning,
    ZeroFunctionError,
)
from .numerics import DEFAULT_PRECISION, PrecisionConfig

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "DEFAULT_PRECISION",
    "DegenerateConfigurationError",
    "DiscontinuityError",
    "DomainError",
    "InvariantViolation",
    "NonConvergenceError",
    "ParseError",
    "PolylogError",
    "PrecisionConfig",
    "PrecisionTooLowError",
    "SingularityError",
    "SingularityProximityWarning",
    "ZeroFunctionError",
]
