"""Exception hierarchy shared by every module."""


class HedropError(Exception):
    """Base class for all errors raised by hedrop."""


class OutOfRangeError(HedropError, ValueError):
    """A property was queried outside the range covered by its data."""


class UnsupportedRegimeError(HedropError, ValueError):
    """Inputs fall outside the physical regime a model is valid for."""


class TableParseError(HedropError, ValueError):
    """A property table could not be parsed.

    ``row`` is the 1-based line number in the source, or None when the
    problem is not tied to one line.
    """

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"line {row}: {message}"
        super().__init__(message)


class MonotonicityError(TableParseError):
    """Temperature grid of a table is not strictly increasing."""


class ConstraintViolation(HedropError, ValueError):
    """A rotor-vibration state breaks the reality constraint X_-m = conj(X_m)."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class IntegrationError(HedropError, RuntimeError):
    """Adaptive integration failed; ``partial`` holds whatever was computed."""

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class SteadyStateError(HedropError, ValueError):
    """No temperature in the tabulated range balances the requested heat load."""
