"""Exception hierarchy shared by every module."""


class IsokernelError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(IsokernelError, ValueError):
    """Polynomial or space parameters outside their admissible range."""


class DomainError(IsokernelError, ValueError):
    """An argument lies outside the domain of the operation (e.g. |z| > 1)."""


class NumericalError(IsokernelError, ArithmeticError):
    """An iterative numerical method failed to converge."""


class ValidationError(IsokernelError, ValueError):
    """Malformed coefficient data; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class UsageError(IsokernelError, ValueError):
    """Operation called with incompatible arguments (e.g. mismatched spaces)."""


class UnsupportedSpaceError(IsokernelError):
    """The space has no numeric point model (Cayley plane, space-time)."""


class DegenerateInputError(IsokernelError, ValueError):
    """Zero coefficient sequence handed to a decision procedure."""
