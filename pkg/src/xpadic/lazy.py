"""Epoch-based lazy evaluation engine.

An exact object is a node with a type tag, a kind, and dependencies that
are either other nodes or opaque constants. The approximation of a node at
epoch n is its kind's get-approx function applied to the epoch-n
approximations of its dependencies; epoch n of the prime field carries
2^n digits. Every node caches the approximations computed so far, and by
contract precision is never lost from one epoch to the next.

Nodes whose recipe is only well defined from some epoch onwards (e.g.
division, where the divisor must not look like zero) carry a min_epoch;
approximations below it are precision-limited coercions of the min_epoch
approximation into the parent structure.
"""

import itertools
import os

from . import approx
from .errors import PrecisionBudgetError, ValidationError, XpadicError

TYPE_RING = "ring"
TYPE_ELT = "elt"
TYPE_POLY_RING = "polyring"
TYPE_POLY = "poly"

DEFAULT_MAX_EPOCH = 31

_state = {
    "max_epoch": int(os.environ.get("XPADIC_MAX_EPOCH", DEFAULT_MAX_EPOCH)),
    "validate": True,
    "instrument": None,
}


def max_epoch():
    return _state["max_epoch"]


def set_max_epoch(n):
    if n < 1:
        raise XpadicError("epoch budget must be at least 1")
    _state["max_epoch"] = n


def validation_enabled():
    return _state["validate"]


def set_validation(enabled):
    _state["validate"] = bool(enabled)


class checks_disabled:
    """Context manager: run without consistency checking."""

    def __enter__(self):
        self._saved = _state["validate"]
        _state["validate"] = False
        return self

    def __exit__(self, *exc):
        _state["validate"] = self._saved
        return False


def set_instrument(callback):
    """Install a callback fired as callback(node, epoch) per get-approx call."""
    _state["instrument"] = callback


def epoch_precision(n):
    """Digit precision of the prime field at epoch n."""
    if n < 1:
        raise XpadicError("epochs start at 1")
    return 2 ** n


# ---------------------------------------------------------------------------
# kinds

class KindEntry:
    __slots__ = ("get_approx", "argc", "dep_types")

    def __init__(self, get_approx, argc=None, dep_types=None):
        self.get_approx = get_approx
        self.argc = argc
        self.dep_types = dep_types


_registry = {}


def register_kind(type_tag, kind, get_approx, argc=None, dep_types=None):
    key = (type_tag, kind)
    if key in _registry:
        raise XpadicError(f"kind {key} already registered")
    _registry[key] = KindEntry(get_approx, argc, dep_types)


def kind_entry(type_tag, kind):
    try:
        return _registry[(type_tag, kind)]
    except KeyError:
        raise XpadicError(f"no kind registered for {(type_tag, kind)}") from None


_node_ids = itertools.count(1)


class LazyNode:
    """One vertex of the dependency graph."""

    __slots__ = ("ident", "type_tag", "kind", "deps", "min_epoch", "parent",
                 "cache")

    def __init__(self, type_tag, kind, deps, *, min_epoch=1, parent=None):
        entry = kind_entry(type_tag, kind)
        deps = tuple(deps)
        if entry.argc is not None and len(deps) != entry.argc:
            raise XpadicError(
                f"kind {kind} expects {entry.argc} dependencies, got {len(deps)}")
        if entry.dep_types is not None:
            for d, expected in zip(deps, entry.dep_types):
                if expected is None:
                    continue
                if not isinstance(d, LazyNode) or d.type_tag != expected:
                    raise XpadicError(
                        f"kind {kind}: dependency type mismatch ({expected} expected)")
        self.ident = next(_node_ids)
        self.type_tag = type_tag
        self.kind = kind
        self.deps = deps
        self.min_epoch = min_epoch
        self.parent = parent
        self.cache = []

    def lazy_deps(self):
        return [d for d in self.deps if isinstance(d, LazyNode)]

    def __repr__(self):
        return f"<node #{self.ident} {self.type_tag}/{self.kind}>"


# ---------------------------------------------------------------------------
# validation helpers (type-dispatched on the approximation object)

def _abs_precision_of(value):
    if isinstance(value, approx.ApproxElement):
        return value.abs_precision()
    if isinstance(value, approx.ApproxRing):
        return value.W
    if isinstance(value, approx.ApproxPoly):
        return value.min_abs_precision()
    if isinstance(value, approx.ApproxPolyRing):
        return value.base.W
    raise XpadicError(f"not an approximation object: {value!r}")


def _weakly_equal_approx(a, b):
    if isinstance(a, approx.ApproxElement):
        return isinstance(b, approx.ApproxElement) and approx.weakly_equal(a, b)
    if isinstance(a, approx.ApproxRing):
        return isinstance(b, approx.ApproxRing) and a.same_family(b)
    if isinstance(a, approx.ApproxPoly):
        return (isinstance(b, approx.ApproxPoly)
                and len(a.coeffs) == len(b.coeffs)
                and approx.weakly_equal_poly(a, b))
    if isinstance(a, approx.ApproxPolyRing):
        return isinstance(b, approx.ApproxPolyRing) and a.same_family(b)
    return False


def _parent_matches(value, parent_approx):
    if isinstance(value, approx.ApproxElement):
        return (isinstance(parent_approx, approx.ApproxRing)
                and value.ring.same_family(parent_approx)
                and value.ring.W == parent_approx.W)
    if isinstance(value, approx.ApproxPoly):
        return (isinstance(parent_approx, approx.ApproxPolyRing)
                and value.ring.same_family(parent_approx.base)
                and value.ring.W == parent_approx.base.W)
    return True


def is_valid_approximation(value, node, n):
    """Pure predicate behind the per-epoch consistency assertion.

    Checks, where applicable: weak equality with the previous cached epoch,
    that absolute precision did not drop, and that an element's parent
    structure approximation matches in family and precision.
    """
    prev = node.cache[n - 2] if (n >= 2 and len(node.cache) >= n - 1) else None
    if prev is not None:
        if not _weakly_equal_approx(value, prev):
            return False
        if _abs_precision_of(value) < _abs_precision_of(prev):
            return False
    if node.parent is not None and len(node.parent.cache) >= n:
        if not _parent_matches(value, node.parent.cache[n - 1]):
            return False
    return True


def _assert_valid(value, node, n):
    if not is_valid_approximation(value, node, n):
        raise ValidationError(
            f"inconsistent approximation for {node!r} at epoch {n}")


# ---------------------------------------------------------------------------
# the main evaluation loop

def _coerce_down(node, value, parent_approx, j):
    """Backfill value for an epoch below min_epoch."""
    if node.type_tag == TYPE_ELT:
        return approx.coerce(parent_approx, value)
    if node.type_tag == TYPE_POLY:
        return value.coerce_to(parent_approx.base)
    if node.type_tag == TYPE_RING:
        W = max(1, value.W >> (node.min_epoch - j))
        return approx.change_precision(value, W)
    base = approx.change_precision(value.base, max(1, value.base.W >> (node.min_epoch - j)))
    return approx.ApproxPolyRing(base)


def _run_get_approx(node, n, dep_values):
    hook = _state["instrument"]
    if hook is not None:
        hook(node, n)
    entry = kind_entry(node.type_tag, node.kind)
    try:
        return entry.get_approx(n, dep_values)
    except XpadicError:
        raise
    except Exception as exc:
        raise XpadicError(
            f"get-approx for {node!r} failed at epoch {n}: {exc}") from exc


def approximation(node, n, budget=None):
    """Approximation of `node` at epoch n (Algorithm: cache-filling loop).

    Fills the node's cache (and, recursively, its dependencies') through
    epoch n. Iterative so that graphs of tens of thousands of nodes do not
    hit the interpreter recursion limit.
    """
    limit = budget if budget is not None else _state["max_epoch"]
    if n < 1:
        raise XpadicError("epochs start at 1")
    if n > limit:
        raise PrecisionBudgetError(
            f"epoch {n} exceeds the epoch budget {limit}", epochs_tried=0)
    stack = [(node, n)]
    while stack:
        x, m = stack[-1]
        if len(x.cache) >= m:
            stack.pop()
            continue
        i = len(x.cache) + 1
        run_epoch = max(i, x.min_epoch)
        pending = [(d, run_epoch) for d in x.lazy_deps()
                   if len(d.cache) < run_epoch]
        if x.parent is not None and len(x.parent.cache) < run_epoch:
            pending.append((x.parent, run_epoch))
        if pending:
            stack.extend(pending)
            continue
        dep_values = [d.cache[run_epoch - 1] if isinstance(d, LazyNode) else d
                      for d in x.deps]
        value = _run_get_approx(x, run_epoch, dep_values)
        if _state["validate"]:
            _assert_valid(value, x, run_epoch)
        if run_epoch > i:
            for j in range(i, run_epoch):
                if x.parent is not None:
                    pa = x.parent.cache[j - 1]
                else:
                    pa = None
                low = _coerce_down(x, value, pa, j)
                if _state["validate"]:
                    _assert_valid(low, x, j)
                x.cache.append(low)
        x.cache.append(value)
    return node.cache[n - 1]


# ---------------------------------------------------------------------------
# user-defined kinds

def _user_get_approx(n, dep_values):
    ga = dep_values[0]
    return ga(dep_values[1:])


register_kind(TYPE_ELT, "user", _user_get_approx)
register_kind(TYPE_POLY, "user_poly", _user_get_approx)


def make_user_node(parent, ga, deps, *, min_epoch=1, type_tag=TYPE_ELT):
    """Element of `parent` whose epoch-n value is ga([dep approximations])."""
    if parent is not None and parent.type_tag not in (TYPE_RING, TYPE_POLY_RING):
        raise XpadicError("parent of a user node must be an exact structure")
    kind = "user" if type_tag == TYPE_ELT else "user_poly"
    return LazyNode(type_tag, kind, (ga, *deps), min_epoch=min_epoch,
                    parent=parent)


# ---------------------------------------------------------------------------
# straight-line-program optimization

class StraightLineProgram:
    """Flattened replacement for an intermediate dependency subgraph.

    Values are indexed [constants..., inputs..., instruction results...];
    each instruction names a (type, kind) pair and the indices of its
    operands, and the last instruction computes the output.
    """

    __slots__ = ("n_constants", "n_inputs", "instructions")

    def __init__(self, n_constants, n_inputs, instructions):
        self.n_constants = n_constants
        self.n_inputs = n_inputs
        self.instructions = tuple(instructions)
        base = n_constants + n_inputs
        for pos, (_, _, operands) in enumerate(self.instructions):
            if any(ix >= base + pos for ix in operands):
                raise XpadicError("program operand refers to a later value")

    def __len__(self):
        return len(self.instructions)

    def run(self, n, values):
        values = list(values)
        for type_tag, kind, operands in self.instructions:
            entry = kind_entry(type_tag, kind)
            values.append(entry.get_approx(n, [values[ix] for ix in operands]))
        return values[-1]

    def __repr__(self):
        return (f"StraightLineProgram({self.n_constants}+{self.n_inputs} in, "
                f"{len(self.instructions)} instructions)")


def _slp_get_approx(n, dep_values):
    program = dep_values[0]
    return program.run(n, dep_values[1:])


register_kind(TYPE_ELT, "optimized", _slp_get_approx)
register_kind(TYPE_POLY, "optimized_poly", _slp_get_approx)


def optimize(z, inputs):
    """Equivalent of z whose only lazy dependencies are `inputs`.

    The subgraph between z and the inputs is flattened into a straight-line
    program; its min_epoch is the maximum over the eliminated intermediate
    nodes. Reaching a structure node that is not itself listed in `inputs`
    means the input list does not cut the graph, which is an error.
    """
    inputs = list(inputs)
    input_set = {id(node) for node in inputs}
    if id(z) in input_set:
        return z
    # iterative post-order over the intermediates
    order = []
    seen = set()
    stack = [(z, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in input_set:
            continue
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        if node.type_tag in (TYPE_RING, TYPE_POLY_RING):
            raise XpadicError(
                f"optimize: {node!r} is reachable but not listed in the inputs")
        stack.append((node, True))
        for d in node.lazy_deps():
            if id(d) not in seen or id(d) in input_set:
                stack.append((d, False))
    constants = []
    index = {}
    for pos, node in enumerate(inputs):
        index[id(node)] = pos  # provisional; shifted after constants are known
    # collect constants in instruction order
    for node in order:
        for d in node.deps:
            if not isinstance(d, LazyNode):
                constants.append(d)
    n_constants = len(constants)
    for node in inputs:
        index[id(node)] = index[id(node)] + n_constants
    const_cursor = 0
    instructions = []
    for pos, node in enumerate(order):
        operands = []
        for d in node.deps:
            if isinstance(d, LazyNode):
                operands.append(index[id(d)])
            else:
                operands.append(const_cursor)
                const_cursor += 1
        instructions.append((node.type_tag, node.kind, tuple(operands)))
        index[id(node)] = n_constants + len(inputs) + pos
    program = StraightLineProgram(n_constants, len(inputs), instructions)
    min_epoch = max((node.min_epoch for node in order), default=1)
    kind = "optimized" if z.type_tag == TYPE_ELT else "optimized_poly"
    return LazyNode(z.type_tag, kind, (program, *constants, *inputs),
                    min_epoch=min_epoch, parent=z.parent)
