"""Shared exception types."""


class BudgetExceeded(Exception):
    """Raised when a request would exceed an explicit work budget.

    Carries a human-readable message naming the budget and the requested
    size.  CLI maps this to exit code 3; bad input (ValueError) maps to 2.
    """
