"""Exception types shared across the library."""


class FourierPDEError(Exception):
    """Base class for all library errors."""


class ParseError(FourierPDEError):
    """Malformed expression text. Carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FragmentError(FourierPDEError):
    """Expression lies outside the supported symbolic fragment."""


class DomainError(FourierPDEError):
    """Invalid interval, branch layout, or parameter domain."""


class UnsupportedProblemError(FourierPDEError):
    """Recognized but deliberately unsupported problem combination."""


class UnboundSymbolError(FourierPDEError):
    """Numeric evaluation hit a variable or function with no binding."""


class ConvergenceError(FourierPDEError):
    """An iterative numeric routine failed to reach its tolerance."""
