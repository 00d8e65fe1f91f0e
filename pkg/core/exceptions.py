"""
Exception hierarchy for SchurLab.
"""

from __future__ import annotations

from typing import Optional


class SchurLabError(Exception):
    """Base class for all library errors"""


class ConfigurationError(SchurLabError, ValueError):
    """Invalid run configuration"""


class InterlacingError(SchurLabError, ValueError):
    """A slice sequence breaks the up-then-down interlacing chain"""

    def __init__(self, message: str, time: Optional[int] = None):
        super().__init__(message)
        self.time = time


class ParityError(SchurLabError, ValueError):
    """A lattice point does not satisfy its half-integer parity constraint"""


class TruncationError(SchurLabError):
    """A truncated series could not reach its tail bound"""

    def __init__(self, message: str, tail_bound: float = float("inf")):
        super().__init__(message)
        self.tail_bound = tail_bound


class EnumerationOverflowError(SchurLabError):
    """Brute-force enumeration exceeded the configured configuration limit"""


class QuadratureError(SchurLabError):
    """Base class for quadrature failures"""


class QuadratureConvergenceError(QuadratureError):
    """Node doubling did not reach the requested tolerance"""

    def __init__(self, message: str, est_error: float = float("inf"), nodes: int = 0):
        super().__init__(message)
        self.est_error = est_error
        self.nodes = nodes


class PoleProximityError(QuadratureError, ValueError):
    """An evaluation point sits on or too close to a zero or pole"""


class SingularEndpointError(QuadratureError, ValueError):
    """An arc integral passes through a non-integrable singularity"""
