"""Exception types raised across the package.

Everything derives from :class:`PidError` so callers can catch one base
class.  The split below mirrors how failures should be handled: argument
and parse errors mean the caller passed something malformed, domain
errors mean the requested quantity does not exist for the given input,
solver errors mean a numerical routine gave up, and consistency errors
mean an internal invariant broke (these indicate a bug, not bad input).
"""

from __future__ import annotations


class PidError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(PidError, ValueError):
    """A caller-supplied argument is malformed or out of range."""


class DomainError(PidError):
    """The requested quantity is undefined for the given input.

    Example: a Kullback-Leibler divergence where the reference
    distribution assigns zero mass to a supported outcome.
    """


class ParseError(PidError):
    """A distribution file could not be parsed.

    Parameters
    ----------
    message:
        Human-readable description of the problem.
    line:
        One-based line number in the input file, or ``None`` when the
        problem is not tied to a single line (for example a bad total
        probability mass).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverError(PidError):
    """A numerical optimization routine failed to produce an answer."""


class IterationLimitError(SolverError):
    """An iterative scheme hit its sweep limit before converging.

    Attributes
    ----------
    residual:
        The constraint violation remaining when the limit was reached.
    """

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class UnsupportedError(PidError):
    """The operation is valid but not implemented for this input size."""


class ConsistencyError(PidError):
    """An internal invariant was violated. Indicates a bug."""
