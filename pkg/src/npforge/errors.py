"""Shared exception types."""


class NpforgeError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(NpforgeError, ValueError):
    """Point/vector length does not match the number of variables."""


class UnsupportedDegree(NpforgeError, ValueError):
    """Operation only defined for polynomials up to a fixed degree."""


class InstanceTooLarge(NpforgeError, RuntimeError):
    """Exhaustive oracle refused: instance exceeds its size bound."""


class ParseError(NpforgeError, ValueError):
    """Malformed input file (DIMACS, edge list, instance file)."""


class ArityMismatch(NpforgeError, ValueError):
    """Wrong number of inputs/outputs/carries for a gate encoding."""


class DegenerateDirection(NpforgeError, RuntimeError):
    """Projection direction produced ties that resampling could not break."""
