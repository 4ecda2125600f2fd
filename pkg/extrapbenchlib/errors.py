"""Exception hierarchy shared by the numerical kernels, solvers and CLI."""

from __future__ import annotations


class ExtrapBenchError(Exception):
    """Base class for every error raised by extrapbenchlib."""


class DimensionError(ExtrapBenchError):
    """Vector or window length does not match what the operation expects."""


class ShapeError(ExtrapBenchError):
    """Operation requires a different Jacobian shape (e.g. square for PGD)."""


class BreakdownError(ExtrapBenchError):
    """A new column is numerically dependent on the current orthonormal basis.

    ``index`` is the position the column would have taken and ``coeffs``
    holds its projection coefficients onto the existing basis.
    """

    def __init__(self, message: str, index: int = 0, coeffs=None):
        super().__init__(message)
        self.index = index
        self.coeffs = coeffs


class SingularError(ExtrapBenchError):
    """Triangular or linearized system is singular beyond threshold."""


class DegenerateError(ExtrapBenchError):
    """Extrapolation coefficients cannot be normalized (vanishing denominator)."""


class UnsupportedError(ExtrapBenchError):
    """Operation is not defined for the given method."""


class LineSearchError(ExtrapBenchError):
    """No step length within the halving budget satisfied the Armijo rule."""


class ConfigError(ExtrapBenchError):
    """Raised when configuration validation fails."""


class ConfigIOError(ConfigError):
    """A configuration file could not be read."""
