"""Exception hierarchy shared by all paircorr modules."""

__all__ = [
    "PairCorrError",
    "DomainError",
    "UnsupportedDimensionError",
    "BudgetExceededError",
    "ConvergenceError",
]


class PairCorrError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PairCorrError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedDimensionError(DomainError):
    """The requested dimension has no implementation (e.g. closed forms exist
    only for n in {2, 3}; exact rational polynomials only for odd n)."""


class BudgetExceededError(PairCorrError, RuntimeError):
    """An enumeration or all-pairs computation would exceed its point budget."""


class ConvergenceError(PairCorrError, ArithmeticError):
    """An iterative numerical scheme failed to converge (should not happen
    for in-domain inputs; indicates a bug or a pathological parameter)."""
