"""Error types shared across the package.

ValidationError marks bad inputs (rejected before any numerics run);
NumericalError marks a computation that produced an untrustworthy result.
The CLI maps them to exit codes 2 and 3 respectively.
"""

__all__ = ["ValidationError", "NumericalError"]


class ValidationError(ValueError):
    """Input failed a domain or normalization check."""


class NumericalError(RuntimeError):
    """A numerical result violated an internal sanity bound."""
