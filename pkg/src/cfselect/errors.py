"""Exception types shared across the package."""


class CfselectError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CfselectError, ValueError):
    """An argument violates a precondition (non-finite value, zero vector, ...)."""


class BudgetExceededError(CfselectError, RuntimeError):
    """A brute-force search would exceed the configured enumeration budget."""


class TableMissError(CfselectError, KeyError):
    """A threshold-table lookup has no row for the requested user count."""


class TableParseError(CfselectError, ValueError):
    """A serialized threshold table is malformed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(CfselectError, ValueError):
    """An experiment configuration is invalid."""


class InternalError(CfselectError, RuntimeError):
    """An invariant that should be unreachable was violated."""
