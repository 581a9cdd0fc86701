"""Exception types shared across the package."""


class MinkowskiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MinkowskiError, ValueError):
    """An argument lies outside the domain of the operation."""


class InsufficientDigits(MinkowskiError, ValueError):
    """A continued fraction does not carry enough digits for the request."""


class CapExceeded(MinkowskiError, ValueError):
    """A depth or level exceeds the configured resource cap."""


class DegenerateInput(MinkowskiError, ValueError):
    """The input is valid but the analysis is meaningless for it (e.g. a rational point)."""
