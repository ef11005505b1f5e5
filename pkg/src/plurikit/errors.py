"""Shared exception types."""


class DomainError(ValueError):
    """An input violates a documented precondition."""


class BudgetExhausted(RuntimeError):
    """A search ran out of its configured budget before succeeding."""
