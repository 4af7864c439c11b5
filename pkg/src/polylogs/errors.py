"""Exception hierarchy shared by every module.

CLI exit codes are attached to the classes so the front end can map
failures without a lookup table.
"""


class PolylogError(Exception):
    exit_code = 1


class DomainError(PolylogError, ValueError):
    """Argument outside the region where an operation is defined."""


class ArgumentError(PolylogError, ValueError):
    """Malformed or out-of-range integer/enum argument."""


class ParseError(PolylogError, ValueError):
    """Text input (path file, rational function, complex literal) is malformed."""


class DiscontinuityError(PolylogError, ValueError):
    """Consecutive path segments do not meet."""


class SingularityError(PolylogError, ValueError):
    """A path passes through, or within the clearance radius of, a pole."""


class DegenerateConfigurationError(PolylogError, ValueError):
    """Coincident points or an argument landing on 0, 1 or infinity."""


class ZeroFunctionError(PolylogError, ValueError):
    """The zero rational function has no valuation."""


class NonConvergenceError(PolylogError, ArithmeticError):
    exit_code = 2


class PrecisionTooLowError(PolylogError, ArithmeticError):
    exit_code = 2


class InvariantViolation(PolylogError, AssertionError):
    exit_code = 3


class SingularityProximityWarning(UserWarning):
    """A path comes closer to a pole than the configured clearance."""
