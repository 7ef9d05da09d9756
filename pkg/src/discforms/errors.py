"""Exception types shared across the package.

The CLI maps PreconditionError to exit code 2 and ConsistencyError to
exit code 3; everything else is a plain bug.
"""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its contract."""


class ConsistencyError(RuntimeError):
    """An internal exact identity failed; the computation cannot be trusted."""


class SearchExhausted(PreconditionError):
    """A bounded enumeration finished without finding the requested object."""
