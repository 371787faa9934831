"""Exception types shared across the package."""


class LandallocError(Exception):
    """Base class for all package errors."""


class ValidationError(LandallocError, ValueError):
    """An input violates a documented invariant (bad instance, bad config)."""


class InstanceFormatError(ValidationError):
    """An instance file could not be parsed."""


class ContractError(LandallocError, ValueError):
    """A caller broke an operation's precondition."""


class BudgetExhausted(LandallocError):
    """Raised by the evaluation counter when no evaluations are left."""


class CoverageError(LandallocError):
    """A comparison archive is missing (instance, optimizer, seed) cells."""
