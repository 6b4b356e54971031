"""
Exception hierarchy for nmcode.

Every error raised on purpose by the library derives from NmCodeError so
the CLI can map it to exit status 2 with a one-line diagnostic.
"""


class NmCodeError(Exception):
    """Base class for all nmcode errors."""


class FieldError(NmCodeError):
    """Bad field parameters or a non-invertible element."""


class DimensionError(NmCodeError):
    """Vector/matrix/code dimensions do not line up."""


class RankError(NmCodeError):
    """A matrix is not of the rank an operation requires."""


class CodeError(NmCodeError):
    """Invalid code parameters or an operation too large for the code."""


class InfeasibleEnumeration(NmCodeError):
    """Exact enumeration would visit more points than allowed."""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(
            f"exact enumeration of {what} needs {size} points (limit {limit}); "
            f"use --mode montecarlo"
        )


class RegimeError(NmCodeError):
    """Parameters fall outside the regime an operation is valid in."""


class BudgetError(NmCodeError):
    """An adversary exceeds its read or write budget."""


class ConfigError(NmCodeError):
    """Invalid run configuration; the message names the field or key."""


class ModeMismatch(NmCodeError):
    """Exact and empirical distributions compared without allow_mixed."""
