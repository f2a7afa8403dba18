"""Exception hierarchy shared by all pricewell modules.

The CLI maps these onto exit codes: DomainError -> 2 (bad parameter),
DataError and subclasses -> 3 (bad input data), NumericError -> 4.
"""


class PriceWellError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PriceWellError, ValueError):
    """A parameter value is outside its allowed domain."""


class DataError(PriceWellError):
    """Input data cannot be used (malformed, inconsistent, or missing)."""


class ParseError(DataError):
    """A file or stream could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderingError(DataError):
    """Rows violate the required strict ordering."""


class InsufficientDataError(DataError):
    """Not enough rows/points for the requested computation."""


class CoverageError(DataError):
    """A lookup table does not span the range it must cover."""


class NumericError(PriceWellError):
    """A numerical routine failed to produce a trustworthy result."""
