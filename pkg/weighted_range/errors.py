"""
Exception types shared by the weighted_range modules.
"""

from typing import Optional


class WeightedRangeError(Exception):
    """Base class for all errors raised by weighted_range."""


class InvalidMatrix(WeightedRangeError, ValueError):
    """Matrix is not square, has non-finite entries or fails the scale guard."""


class InputFormatError(WeightedRangeError, ValueError):
    """Matrix or weight file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DimensionMismatch(WeightedRangeError, ValueError):
    """Weight vector length does not match the matrix dimension."""


class NotHermitian(WeightedRangeError, ValueError):
    """A Hermitian matrix was required."""


class NotNormal(WeightedRangeError, ValueError):
    """A normal matrix was required."""


class DimensionTooLarge(WeightedRangeError, ValueError):
    """Matrix dimension exceeds a combinatorial guard."""


class DegreeTooLarge(WeightedRangeError, ValueError):
    """deg(A;c) exceeds the enumeration guard."""


class WeightCountExceedsDimension(WeightedRangeError, ValueError):
    """More nonzero weights than eigenvalues."""


class DegenerateConfiguration(WeightedRangeError, ValueError):
    """Too few or collinear points for a circle or ellipse fit."""


class DegenerateRegion(WeightedRangeError, ValueError):
    """A two-dimensional region was required."""


class NonConvergence(WeightedRangeError, ArithmeticError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (best residual {residual:.3e})")


class DegenerateEigenvalue(WeightedRangeError, ArithmeticError):
    """Eigenvalues receiving different weights are not separated."""


class NoSignChange(WeightedRangeError, ArithmeticError):
    """Support gap never changes sign on the searched interval."""

    def __init__(self, message: str, nearest_angle: float, nearest_gap: float):
        self.nearest_angle = nearest_angle
        self.nearest_gap = nearest_gap
        super().__init__(f"{message} (nearest angle {nearest_angle:.12g}, gap {nearest_gap:.3e})")
