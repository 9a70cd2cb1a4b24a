"""Exception types raised across the package."""


class MurrayCoatError(Exception):
    """Base class for all package errors."""


class ValidationError(MurrayCoatError, ValueError):
    """A parameter, grid or configuration invariant is violated."""


class ParseError(MurrayCoatError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ShapeMismatch(MurrayCoatError, ValueError):
    """A field does not match the grid it is used with."""


class NoBracket(MurrayCoatError):
    """No sign change of the stationarity residual was found."""


class NonFinite(MurrayCoatError, FloatingPointError):
    """A time step produced NaN or infinite values."""

    def __init__(self, message, step=None, t=None):
        self.step = step
        self.t = t
        super().__init__(message)


class BadRange(MurrayCoatError, ValueError):
    pass


class EmptyTrajectory(MurrayCoatError, ValueError):
    pass


class InsufficientData(MurrayCoatError, ValueError):
    pass


class DomainError(MurrayCoatError, ValueError):
    """Arguments fall outside the domain of a closed-form bound."""
