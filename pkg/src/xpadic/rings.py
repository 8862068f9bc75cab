"""Exact p-adic structures, elements and univariate polynomials.

Each object wraps a lazy node whose approximations live in the
fixed-precision backend: the prime field at epoch n is approximated at
2^n digits, an extension at epoch n is the extension of the base's
epoch-n approximation by the defining polynomial's epoch-n approximation,
and elements approximate into their parent's approximation at the same
epoch. Polynomials are single nodes holding all coefficients at once, so
an operation like multiplication adds one node to the graph rather than
one per coefficient pair.
"""

from fractions import Fraction

from . import approx, lazy
from .errors import CoercionError, PrecisionBudgetError, XpadicError

# ---------------------------------------------------------------------------
# kind table


def _ga_prime_field(n, deps):
    p, family = deps
    return approx.make_prime_ring(p, lazy.epoch_precision(n), family=family,
                                  field=True)


def _ga_prime_ring(n, deps):
    p, family = deps
    return approx.make_prime_ring(p, lazy.epoch_precision(n), family=family,
                                  field=False)


def _ga_extension(n, deps):
    family, mode, g = deps
    return approx.extend(g.ring, g, mode, family=family)


def _ga_poly_ring(n, deps):
    return approx.ApproxPolyRing(deps[0])


def _ga_coerce(n, deps):
    ring, a = deps
    return ring.coerce_rational(a)


def _ga_from_base(n, deps):
    ring, x = deps
    return ring.coerce_from_base(x)


def _ga_uniformizer(n, deps):
    return deps[0].uniformizer()


def _ga_generator(n, deps):
    return deps[0].generator()


def _ga_from_coeffs(n, deps):
    poly_ring, *coeffs = deps
    return approx.ApproxPoly(poly_ring.base, coeffs)


def _ga_poly_eval(n, deps):
    f, a = deps
    return f.evaluate(a)


def _ga_poly_coeff(n, deps):
    f, i = deps
    if i > f.degree:
        raise XpadicError(f"coefficient index {i} out of range")
    return f.coeffs[i]


def _ga_shift(n, deps):
    f, a = deps
    return f.shift_argument(a)


def _ga_scale(n, deps):
    f, j, t = deps
    return f.scale(j, t)


_ELT_OPS = {
    "add": lambda n, d: d[0] + d[1],
    "sub": lambda n, d: d[0] - d[1],
    "mul": lambda n, d: d[0] * d[1],
    "div": lambda n, d: d[0] / d[1],
    "neg": lambda n, d: -d[0],
    "pow": lambda n, d: d[0] ** d[1],
}

_POLY_OPS = {
    "padd": lambda n, d: d[0] + d[1],
    "psub": lambda n, d: d[0] - d[1],
    "pmul": lambda n, d: d[0] * d[1],
    "pneg": lambda n, d: -d[0],
    "derivative": lambda n, d: d[0].derivative(),
}


def _register_kinds():
    reg = lazy.register_kind
    reg(lazy.TYPE_RING, "prime_field", _ga_prime_field, argc=2)
    reg(lazy.TYPE_RING, "prime_ring", _ga_prime_ring, argc=2)
    reg(lazy.TYPE_RING, "extension", _ga_extension, argc=3)
    reg(lazy.TYPE_POLY_RING, "poly_ring", _ga_poly_ring, argc=1)
    reg(lazy.TYPE_ELT, "coerce", _ga_coerce, argc=2)
    reg(lazy.TYPE_ELT, "from_base", _ga_from_base, argc=2)
    reg(lazy.TYPE_ELT, "uniformizer", _ga_uniformizer, argc=1)
    reg(lazy.TYPE_ELT, "generator", _ga_generator, argc=1)
    for name, fn in _ELT_OPS.items():
        reg(lazy.TYPE_ELT, name, fn)
    reg(lazy.TYPE_ELT, "poly_eval", _ga_poly_eval, argc=2)
    reg(lazy.TYPE_ELT, "poly_coeff", _ga_poly_coeff, argc=2)
    reg(lazy.TYPE_POLY, "from_coeffs", _ga_from_coeffs)
    for name, fn in _POLY_OPS.items():
        reg(lazy.TYPE_POLY, name, fn)
    reg(lazy.TYPE_POLY, "shift", _ga_shift, argc=2)
    reg(lazy.TYPE_POLY, "scale", _ga_scale, argc=3)


_register_kinds()


# ---------------------------------------------------------------------------
# structures


class ExactStructure:
    """An exact p-adic field or ring (prime or a tower extension)."""

    def __init__(self, node, *, p, e, f, base=None, defining=None,
                 family=None, field=True):
        self.node = node
        self.p = p
        self.e = e
        self.f = f
        self.base = base
        self.defining = defining
        self.family = family
        self.field = field
        self._poly_ring = None

    @property
    def degree(self):
        return self.e * self.f

    def approx_at(self, n, budget=None):
        return lazy.approximation(self.node, n, budget)

    def polynomial_ring(self):
        if self._poly_ring is None:
            node = lazy.LazyNode(lazy.TYPE_POLY_RING, "poly_ring", (self.node,))
            self._poly_ring = ExactPolyRing(node, self)
        return self._poly_ring

    def __call__(self, value):
        return elt_from(self, value)

    def zero(self):
        return elt_from(self, 0)

    def one(self):
        return elt_from(self, 1)

    def uniformizer(self):
        node = lazy.LazyNode(lazy.TYPE_ELT, "uniformizer", (self.node,),
                             parent=self.node)
        return ExactElement(node, self)

    def generator(self):
        if self.base is None:
            raise XpadicError("the prime structure has no extension generator")
        node = lazy.LazyNode(lazy.TYPE_ELT, "generator", (self.node,),
                             parent=self.node)
        return ExactElement(node, self)

    def is_ancestor_of(self, other):
        s = other
        while s is not None:
            if s is self:
                return True
            s = s.base
        return False

    def __repr__(self):
        if self.base is None:
            return f"Exact{'Field' if self.field else 'Ring'}({self.p})"
        return f"ExactExtension(e={self.e}, f={self.f} over p={self.p})"


def exact_prime_field(p):
    """The exact field Q_p."""
    if not approx.is_probable_prime(p):
        raise XpadicError(f"{p} is not prime")
    family = approx.RingFamily(p, label=f"Q{p}")
    node = lazy.LazyNode(lazy.TYPE_RING, "prime_field", (p, family))
    return ExactStructure(node, p=p, e=1, f=1, family=family, field=True)


def exact_prime_ring(p):
    """The exact ring Z_p."""
    if not approx.is_probable_prime(p):
        raise XpadicError(f"{p} is not prime")
    family = approx.RingFamily(p, label=f"Z{p}")
    node = lazy.LazyNode(lazy.TYPE_RING, "prime_ring", (p, family))
    return ExactStructure(node, p=p, e=1, f=1, family=family, field=False)


def exact_extension(base, f, mode, budget=None):
    """Extension of `base` by the exact polynomial f (unramified or eisenstein).

    The mode condition is verified at the first epoch where it is decidable,
    which becomes the structure's min_epoch.
    """
    if not isinstance(f, ExactPoly):
        raise XpadicError("the defining polynomial must be an ExactPoly")
    if f.base_structure is not base:
        raise XpadicError("defining polynomial is not over the base structure")
    limit = budget if budget is not None else lazy.max_epoch()
    min_epoch = None
    for n in range(1, limit + 1):
        g = f.approx_at(n)
        try:
            ok, why = approx.check_extension_condition(g, mode)
        except XpadicError as exc:
            if "undecided" in str(exc):
                continue
            raise
        if not ok:
            raise XpadicError(f"polynomial fails the {mode} condition: {why}")
        min_epoch = n
        break
    if min_epoch is None:
        raise PrecisionBudgetError(
            f"could not certify the {mode} condition within the epoch budget",
            epochs_tried=limit)

    def provider(base_digits):
        n = 1
        while lazy.epoch_precision(n) < base_digits:
            n += 1
        return f.approx_at(max(n, min_epoch))

    family = approx.RingFamily(base.p, label=f"{mode}-ext", provider=provider)
    node = lazy.LazyNode(lazy.TYPE_RING, "extension",
                         (family, mode, f.node), min_epoch=min_epoch)
    d = f.degree_bound
    e = base.e * (d if mode == "eisenstein" else 1)
    fres = base.f * (d if mode == "unramified" else 1)
    return ExactStructure(node, p=base.p, e=e, f=fres, base=base, defining=f,
                          family=family, field=base.field)


# ---------------------------------------------------------------------------
# elements


class ExactElement:
    """An exact p-adic number: a lazy node plus its parent structure."""

    def __init__(self, node, parent):
        self.node = node
        self.parent = parent

    def approx_at(self, n, budget=None):
        return lazy.approximation(self.node, n, budget)

    def __repr__(self):
        return f"ExactElement(node #{self.node.ident} of {self.parent!r})"

    def __add__(self, other):
        return elt_arith("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return elt_arith("sub", self, other)

    def __rsub__(self, other):
        return elt_arith("sub", elt_from(self.parent, other), self)

    def __mul__(self, other):
        return elt_arith("mul", self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return elt_arith("div", self, other)

    def __rtruediv__(self, other):
        return elt_arith("div", elt_from(self.parent, other), self)

    def __neg__(self):
        return elt_arith("neg", self)

    def __pow__(self, m):
        return elt_arith("pow", self, m)


def elt_from(S, src):
    """Element of S from an integer, rational, base element, or the markers
    "uniformizer" / "generator"."""
    if isinstance(src, ExactElement):
        if src.parent is S:
            return src
        if src.parent.is_ancestor_of(S):
            cur = src
            chain = []
            s = S
            while s is not src.parent:
                chain.append(s)
                s = s.base
            for s in reversed(chain):
                node = lazy.LazyNode(lazy.TYPE_ELT, "from_base",
                                     (s.node, cur.node), parent=s.node)
                cur = ExactElement(node, s)
            return cur
        raise CoercionError("element does not embed into the target structure")
    if isinstance(src, str):
        if src == "uniformizer":
            return S.uniformizer()
        if src == "generator":
            return S.generator()
        raise XpadicError(f"unknown element marker {src!r}")
    value = Fraction(src)
    if not S.field:
        den = value.denominator
        if den % S.p == 0:
            raise CoercionError(
                f"{value} has negative valuation; not in this integer ring")
    payload = int(value) if value.denominator == 1 else value
    node = lazy.LazyNode(lazy.TYPE_ELT, "coerce", (S.node, payload),
                         parent=S.node)
    return ExactElement(node, S)


def _common_parent(x, y):
    if x.parent is y.parent:
        return x, y
    if x.parent.is_ancestor_of(y.parent):
        return elt_from(y.parent, x), y
    if y.parent.is_ancestor_of(x.parent):
        return x, elt_from(x.parent, y)
    raise CoercionError("elements do not share a structure")


def _first_nonzero_epoch(x, budget=None):
    """Smallest epoch at which x is not weakly zero."""
    limit = budget if budget is not None else lazy.max_epoch()
    last_wv = None
    for n in range(1, limit + 1):
        xa = x.approx_at(n)
        if not xa.is_weakly_zero():
            return n
        last_wv = xa.v
    raise PrecisionBudgetError(
        "cannot certify the element nonzero within the epoch budget",
        last_weak_valuation=last_wv, epochs_tried=limit)


def elt_arith(op, x, y=None, budget=None):
    """Arithmetic node over exact elements; div certifies its divisor."""
    if op == "neg":
        node = lazy.LazyNode(lazy.TYPE_ELT, "neg", (x.node,),
                             parent=x.parent.node)
        return ExactElement(node, x.parent)
    if op == "pow":
        if not isinstance(y, int):
            raise XpadicError("pow exponent must be an integer")
        min_epoch = 1
        if y < 0:
            min_epoch = _first_nonzero_epoch(x, budget)
        node = lazy.LazyNode(lazy.TYPE_ELT, "pow", (x.node, y),
                             min_epoch=min_epoch, parent=x.parent.node)
        return ExactElement(node, x.parent)
    if not isinstance(y, ExactElement):
        y = elt_from(x.parent, y)
    x, y = _common_parent(x, y)
    min_epoch = 1
    if op == "div":
        min_epoch = _first_nonzero_epoch(y, budget)
    node = lazy.LazyNode(lazy.TYPE_ELT, op, (x.node, y.node),
                         min_epoch=min_epoch, parent=x.parent.node)
    return ExactElement(node, x.parent)


def make_user_element(S, ga, deps, *, min_epoch=1):
    """Element of S defined by a user get-approx function.

    ga receives the list of dependency approximations at the current epoch
    and must return an element of S's approximation.
    """
    dep_nodes = tuple(d.node if isinstance(d, (ExactElement, ExactPoly,
                                               ExactStructure)) else d
                      for d in deps)
    node = lazy.make_user_node(S.node, ga, dep_nodes, min_epoch=min_epoch)
    return ExactElement(node, S)


# ---------------------------------------------------------------------------
# polynomials


class ExactPolyRing:
    """Ring of univariate polynomials over an exact structure."""

    def __init__(self, node, base_structure):
        self.node = node
        self.base_structure = base_structure

    def approx_at(self, n, budget=None):
        return lazy.approximation(self.node, n, budget)

    def gen(self):
        return poly_from_coeffs(self, [0, 1])

    def __call__(self, coeffs):
        return poly_from_coeffs(self, coeffs)

    def __repr__(self):
        return f"ExactPolyRing over {self.base_structure!r}"


class ExactPoly:
    """A univariate polynomial as a single lazy node."""

    def __init__(self, node, parent_ring, degree_bound):
        self.node = node
        self.parent_ring = parent_ring
        self.degree_bound = degree_bound

    @property
    def base_structure(self):
        return self.parent_ring.base_structure

    @property
    def degree(self):
        return self.degree_bound

    def approx_at(self, n, budget=None):
        return lazy.approximation(self.node, n, budget)

    def __repr__(self):
        return f"ExactPoly(node #{self.node.ident}, degree {self.degree_bound})"

    def __add__(self, other):
        return poly_arith("add", self, _as_poly(self.parent_ring, other))

    def __sub__(self, other):
        return poly_arith("sub", self, _as_poly(self.parent_ring, other))

    def __mul__(self, other):
        return poly_arith("mul", self, _as_poly(self.parent_ring, other))

    def __neg__(self):
        return poly_arith("neg", self)

    def __pow__(self, m):
        if not isinstance(m, int) or m < 0:
            raise XpadicError("polynomial powers must be non-negative integers")
        result = poly_from_coeffs(self.parent_ring, [1])
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def derivative(self):
        return poly_arith("derivative", self)

    def shift(self, a):
        return poly_arith("shift", self, a)

    def scale(self, j, t):
        return poly_arith("scale", self, (j, t))

    def evaluate(self, a):
        return poly_arith("evaluate", self, a)

    def coefficient(self, i):
        return coefficient(self, i)


def _as_poly(PR, value):
    if isinstance(value, ExactPoly):
        return value
    if isinstance(value, ExactElement) or isinstance(value, (int, Fraction)):
        return poly_from_coeffs(PR, [value])
    raise XpadicError(f"cannot use {type(value).__name__} as a polynomial")


def poly_from_coeffs(PR, coeffs):
    """Polynomial from low-to-high coefficients (elements or numbers)."""
    coeffs = list(coeffs)
    if not coeffs:
        raise XpadicError("use [0] for the zero polynomial, not an empty list")
    S = PR.base_structure
    elts = [elt_from(S, c) for c in coeffs]
    for e in elts:
        if e.parent is not S:
            raise XpadicError("coefficient from a different structure")
    node = lazy.LazyNode(lazy.TYPE_POLY, "from_coeffs",
                         (PR.node, *[e.node for e in elts]), parent=PR.node)
    return ExactPoly(node, PR, len(coeffs) - 1)


def poly_arith(op, f, arg=None):
    """One lazy node per polynomial operation."""
    PR = f.parent_ring
    if op in ("add", "sub", "mul"):
        g = arg
        if g.parent_ring is not PR:
            raise XpadicError("polynomials over different rings")
        kind = {"add": "padd", "sub": "psub", "mul": "pmul"}[op]
        bound = (f.degree_bound + g.degree_bound if op == "mul"
                 else max(f.degree_bound, g.degree_bound))
        node = lazy.LazyNode(lazy.TYPE_POLY, kind, (f.node, g.node),
                             parent=PR.node)
        return ExactPoly(node, PR, bound)
    if op == "neg":
        node = lazy.LazyNode(lazy.TYPE_POLY, "pneg", (f.node,), parent=PR.node)
        return ExactPoly(node, PR, f.degree_bound)
    if op == "derivative":
        node = lazy.LazyNode(lazy.TYPE_POLY, "derivative", (f.node,),
                             parent=PR.node)
        return ExactPoly(node, PR, max(0, f.degree_bound - 1))
    if op == "shift":
        a = elt_from(PR.base_structure, arg)
        node = lazy.LazyNode(lazy.TYPE_POLY, "shift", (f.node, a.node),
                             parent=PR.node)
        return ExactPoly(node, PR, f.degree_bound)
    if op == "scale":
        j, t = arg
        if not (isinstance(j, int) and isinstance(t, int)):
            raise XpadicError("scale exponents must be integers")
        node = lazy.LazyNode(lazy.TYPE_POLY, "scale", (f.node, j, t),
                             parent=PR.node)
        return ExactPoly(node, PR, f.degree_bound)
    if op == "evaluate":
        a = elt_from(PR.base_structure, arg)
        node = lazy.LazyNode(lazy.TYPE_ELT, "poly_eval", (f.node, a.node),
                             parent=PR.base_structure.node)
        return ExactElement(node, PR.base_structure)
    raise XpadicError(f"unknown polynomial operation {op!r}")


def coefficient(f, i):
    """The i-th coefficient as an element node depending on f.

    Extracting every coefficient of a polynomial whose approximation is
    produced by an iterative routine (such as a lifted factor) repeats that
    routine once per coefficient; prefer using the polynomial whole.
    """
    if not 0 <= i <= f.degree_bound:
        raise XpadicError(f"coefficient index {i} out of range")
    S = f.base_structure
    node = lazy.LazyNode(lazy.TYPE_ELT, "poly_coeff", (f.node, i),
                         parent=S.node)
    return ExactElement(node, S)


def optimize_element(x, inputs):
    """Straight-line-program version of an element or polynomial."""
    input_nodes = [i.node for i in inputs]
    node = lazy.optimize(x.node, input_nodes)
    if node is x.node:
        return x
    if isinstance(x, ExactPoly):
        return ExactPoly(node, x.parent_ring, x.degree_bound)
    return ExactElement(node, x.parent)
