"""Exception and warning types shared across the package."""


class ScpError(Exception):
    """Base class for all set-covering errors."""


class InstanceError(ScpError, ValueError):
    pass


class UnsatisfiableRow(InstanceError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row} (0-based) is covered by no column")


class BadIndex(InstanceError):
    pass


class BadCost(InstanceError):
    pass


class DomainError(ScpError, ValueError):
    pass


class FormatError(ScpError, ValueError):
    pass


class Truncated(FormatError):
    pass


class BadToken(FormatError):
    def __init__(self, position, token):
        self.position = position
        self.token = token
        super().__init__(f"bad token {token!r} at position {position}")


class TrailingGarbage(FormatError):
    pass


class UnrecognizedFormat(FormatError):
    def __init__(self, row_error, col_error):
        self.row_error = row_error
        self.col_error = col_error
        super().__init__(
            f"input is neither row ordering ({row_error}) nor column ordering ({col_error})"
        )


class TooLarge(ScpError, ValueError):
    pass


class NotFeasible(ScpError, ValueError):
    pass


class InsufficientData(ScpError, ValueError):
    pass


class ResourceExhausted(ScpError, RuntimeError):
    """Raised when a safety cap stopped annealing before saturation.

    The (possibly poor) solution is kept on ``self.solution``.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class FallbackParameters(UserWarning):
    pass


class AmbiguousFormat(UserWarning):
    pass
