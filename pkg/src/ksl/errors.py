"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation.

    Raised instead of returning NaN or a silently wrong value. The message
    names the violated bound so CLI callers can surface it verbatim.
    """
