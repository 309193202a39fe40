"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class HomexpError(Exception):
    """Base class for all errors raised by homexp."""


class PreconditionError(HomexpError, ValueError):
    """An input violates a documented precondition (CLI exit code 2)."""


class DegenerateDistributionError(PreconditionError):
    """A Gibbs measure cannot be normalized because its partition sum is zero."""


class ResourceError(HomexpError, RuntimeError):
    """A computation would exceed a configured budget (CLI exit code 3)."""

    def __init__(self, message, cap_name=None, cap=None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap = cap


class InternalConsistencyError(HomexpError, AssertionError):
    """A proven identity or bound failed to hold; indicates a bug."""
