"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SemispaceError(Exception):
    exit_code = 1


class InputError(SemispaceError, ValueError):
    """Malformed input such as unreadable JSON or an out-of-range index."""

    exit_code = 2


class PreconditionError(SemispaceError, ValueError):
    """A mathematical precondition is violated, e.g. tied weights or a loop in I."""

    exit_code = 3


class GenericityError(PreconditionError):
    def __init__(self, message, patterns=()):
        super().__init__(message)
        self.patterns = tuple(patterns)


class ConsistencyError(SemispaceError):
    """Two routes that must agree did not."""

    exit_code = 4


class ConvergenceError(ConsistencyError):
    pass


class ResourceLimitError(SemispaceError):
    """Buchberger pair or support cutoff exceeded."""

    exit_code = 5
