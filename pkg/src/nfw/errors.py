"""Exception types raised by nfw."""


class NfwError(Exception):
    """Base class for all nfw errors."""


class PolynomialSyntaxError(NfwError, ValueError):
    """
    Polynomial text does not follow the grammar.

    Args:
        message: What went wrong
        position: 0-based character offset into the parsed text
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class ProblemFileError(NfwError, ValueError):
    """Problem file is malformed. Line and column are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class WindowError(NfwError, ValueError):
    """A series window is too small for the requested result."""


class NonPolynomialSeriesError(NfwError, ValueError):
    """A series expected to be a polynomial has a nonzero tail on its window."""


class FiltrationError(NfwError, ValueError):
    """Filtration data cannot produce finite-dimensional quotients."""


class ResourceLimitError(NfwError, RuntimeError):
    """A configured resource cap was exceeded."""
