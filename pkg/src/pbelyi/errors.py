"""Shared exception types.

PreconditionError covers violated input contracts and failed feasibility
hypotheses; the CLI maps it to exit code 2.  Anything else that escapes is
treated as an internal error (exit code 1).
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition or feasibility hypothesis."""


class InseparableMapError(PreconditionError):
    """The map's Wronskian vanishes identically."""


class GuardExceededError(PreconditionError):
    """A desk-scale guard would be exceeded; the message names the limit."""


class InternalInconsistencyError(RuntimeError):
    """An exactness invariant failed internally (bug or corrupted state)."""
