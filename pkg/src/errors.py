"""
Exception hierarchy for pregeomzol.

DESIGN DECISION: Only broken preconditions and exhausted resources raise.
Colouring-condition failures are reported as data (see src.validation) and
formula-evaluation budgets come back as a BudgetExceeded value.

The harness maps each family onto a process exit code:
- ConfigError, DomainError, PreconditionError -> 1
- ResourceCapExceeded -> 2
- InvariantViolation -> 3
"""

from typing import Any, Optional


class PregeomzolError(Exception):
    """Base exception for everything raised by this package."""
    pass


class ConfigError(PregeomzolError):
    """Experiment configuration could not be read or is inconsistent."""
    pass


class DomainError(PregeomzolError):
    """Input lies outside the mathematical domain of the operation."""
    pass


class PreconditionError(PregeomzolError):
    """A documented precondition of an operation does not hold."""
    pass


class ResourceCapExceeded(PregeomzolError):
    """A configured resource cap would be exceeded."""

    def __init__(
        self,
        cap_name: str,
        limit: int,
        observed: Optional[int] = None,
        partial: Optional[dict[str, Any]] = None,
    ):
        self.cap_name = cap_name
        self.limit = limit
        self.observed = observed
        self.partial = partial or {}
        detail = f" (needed {observed})" if observed is not None else ""
        super().__init__(f"Resource cap '{cap_name}' = {limit} exceeded{detail}")


class InvariantViolation(PregeomzolError):
    """An internal invariant failed. This is always a bug."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        self.details = details or {}
        super().__init__(message)
