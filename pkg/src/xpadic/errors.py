"""Exception hierarchy shared by all xpadic layers."""


class XpadicError(Exception):
    """Base class for all library errors."""


class PrecisionBudgetError(XpadicError):
    """A semi-terminating computation ran out of its epoch budget.

    Carries whatever partial information was available when the budget ran
    out, so callers can still act on it.
    """

    def __init__(self, message, *, last_weak_valuation=None,
                 last_abs_precision=None, epochs_tried=None):
        super().__init__(message)
        self.last_weak_valuation = last_weak_valuation
        self.last_abs_precision = last_abs_precision
        self.epochs_tried = epochs_tried


class ValidationError(XpadicError):
    """An approximation failed a consistency check.

    This signals a bug in a get-approx routine (or deliberately corrupted
    input), never a recoverable user condition.
    """


class WeaklyZeroDivisionError(XpadicError):
    """Division by an element that is zero to the working precision."""


class CoercionError(XpadicError):
    """A value cannot be represented in the requested structure."""
