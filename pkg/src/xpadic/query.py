"""Queries on exact elements: valuation, comparison, distinctness.

Functions whose names carry "weak" report properties of the current
representation, not of the underlying number. valuation() refines the
element until its valuation is provably known, so it can run out of budget
on an uncertified zero; valuation_cmp() always terminates because it only
needs the precision to pass the comparison point.
"""

from . import lazy
from .approx import INF
from .errors import PrecisionBudgetError


def weak_valuation_at(x, n):
    return x.approx_at(n).v


def abs_precision_at(x, n):
    return x.approx_at(n).abs_precision()


def is_weakly_zero_at(x, n):
    return x.approx_at(n).is_weakly_zero()


def valuation(x, budget=None):
    """The valuation of x; +inf (returned immediately) for a certified zero.

    Raises PrecisionBudgetError when x stays weakly zero through the
    budget -- x may be an uncertified zero. The error carries the last
    weak valuation observed.
    """
    limit = budget if budget is not None else lazy.max_epoch()
    last = None
    for n in range(1, limit + 1):
        xa = x.approx_at(n, budget=limit)
        if xa.valuation_known():
            return INF if xa.is_precise_zero() else xa.v
        last = xa
    raise PrecisionBudgetError(
        f"valuation still unknown after {limit} epochs (element may be zero)",
        last_weak_valuation=last.v if last is not None else None,
        last_abs_precision=last.abs_precision() if last is not None else None,
        epochs_tried=limit)


def valuation_cmp(x, v, budget=None):
    """-1, 0 or +1 as val(x) is <, = or > the integer v. Terminates."""
    limit = budget if budget is not None else lazy.max_epoch()
    last = None
    for n in range(1, limit + 1):
        xa = x.approx_at(n, budget=limit)
        if xa.valuation_known() or xa.abs_precision() > v:
            wv = xa.v
            return (wv > v) - (wv < v)
        last = xa
    raise PrecisionBudgetError(
        f"epoch budget {limit} too small to compare a valuation against {v}",
        last_weak_valuation=last.v if last is not None else None,
        epochs_tried=limit)


def are_distinct(x, y, budget=None):
    """True as soon as x and y provably differ; never returns False.

    Equality of arbitrary elements is undecidable from finite
    approximations, so indistinguishable inputs exhaust the budget instead
    of answering.
    """
    limit = budget if budget is not None else lazy.max_epoch()
    diff = x - y
    last = None
    for n in range(1, limit + 1):
        da = diff.approx_at(n, budget=limit)
        if not da.is_weakly_zero():
            return True
        last = da
    raise PrecisionBudgetError(
        f"elements indistinguishable through {limit} epochs (they may be equal)",
        last_weak_valuation=last.v if last is not None else None,
        epochs_tried=limit)
