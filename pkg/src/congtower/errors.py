"""Shared exception types, mapped to CLI exit codes in congtower.cli."""


class CongtowerError(Exception):
    """Base class for errors raised by this package."""


class InputError(CongtowerError):
    """Malformed or unsupported input (bad ring spec, parse error, missing file)."""


class BudgetExceeded(CongtowerError):
    """An enumeration or search hit its declared budget before finishing."""

    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class CheckFailed(CongtowerError):
    """A verification that was expected to certify something refused to."""
