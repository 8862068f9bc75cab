"""Zealous fixed-precision p-adic arithmetic.

This is the self-contained "inexact" backend on which the lazy layer is
built. A ring is either the prime field/ring Q_p / Z_p at a working
precision of W p-adic digits, or a tower of unramified / Eisenstein
extension steps over it. An element represents the residue class

    pi^v * u + pi^(v+k) * O

where v is the weak valuation, k the relative precision and u the unit
part. For the prime ring u is an integer in [0, p^k); for an extension
step the element is stored as a coefficient vector over the base and
(v, k) are derived from the vector.

Rings in the same *family* (precision-variants of the same underlying
exact ring) coerce into each other by digit truncation.
"""

import itertools
import math
from fractions import Fraction

from .errors import CoercionError, WeaklyZeroDivisionError, XpadicError
from . import residue

INF = math.inf

_family_counter = itertools.count(1)


def is_probable_prime(n):
    """Miller-Rabin with bases that are deterministic below 3.3 * 10^24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _val_int(n, p):
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class RingFamily:
    """Identity token shared by all precision-variants of one exact ring.

    For extensions it may carry a provider callback mapping a base-digit
    precision to a defining polynomial at (at least) that precision, which
    is what lets change_precision build a finer variant on demand.
    """

    def __init__(self, p, label=None, provider=None):
        self.token = next(_family_counter)
        self.p = p
        self.label = label or f"family{self.token}"
        self.provider = provider

    def __repr__(self):
        return f"RingFamily({self.label})"


class ApproxRing:
    """A fixed-precision p-adic ring or field (possibly a tower)."""

    def __init__(self, p, W, *, base=None, defining=None, mode=None,
                 family=None, field=True):
        self.p = p
        self.W = W
        self.base = base
        self.defining = defining
        self.mode = mode
        self.field = field
        self.family = family
        if base is None:
            self.e_step = 1
            self.step_degree = 1
            self.e = 1
            self.f = 1
        else:
            self.step_degree = defining.degree
            self.e_step = self.step_degree if mode == "eisenstein" else 1
            self.e = base.e * self.e_step
            self.f = base.f * (self.step_degree if mode == "unramified" else 1)
        self._residue_field = None

    # -- structure queries ------------------------------------------------

    @property
    def degree(self):
        return self.e * self.f

    def same_family(self, other):
        return self.family is other.family

    def residue_field(self):
        if self._residue_field is None:
            if self.base is None:
                self._residue_field = residue.FiniteField(self.p)
            elif self.mode == "eisenstein":
                self._residue_field = self.base.residue_field()
            else:
                Fbase = self.base.residue_field()
                mod = tuple(c.residue() for c in self.defining.coeffs)
                self._residue_field = residue.FiniteField(self.p, Fbase, mod)
        return self._residue_field

    def __repr__(self):
        if self.base is None:
            kind = "Q" if self.field else "Z"
            return f"{kind}_{self.p} (precision {self.W})"
        return (f"ext<{self.mode},deg {self.step_degree}> of {self.base!r} "
                f"(precision {self.W})")

    # -- element constructors ---------------------------------------------

    def zero(self):
        if self.base is None:
            return ApproxElement(self, INF, 0, 0)
        return ApproxElement(self, INF, 0,
                             tuple(self.base.zero() for _ in range(self.step_degree)))

    def one(self):
        return self.coerce_rational(1)

    def uniformizer(self):
        if self.base is None:
            return ApproxElement(self, 1, self.W, 1)
        if self.mode == "eisenstein":
            coeffs = [self.base.zero()] * self.step_degree
            coeffs[1] = self.base.one()
            return _make_ext(self, tuple(coeffs))
        return self.coerce_from_base(self.base.uniformizer())

    def generator(self):
        if self.base is None:
            raise XpadicError("the prime ring has no extension generator")
        coeffs = [self.base.zero()] * self.step_degree
        coeffs[1] = self.base.one()
        return _make_ext(self, tuple(coeffs))

    def coerce_rational(self, a):
        a = Fraction(a)
        if a.denominator % self.p == 0 and not self.field:
            raise CoercionError(
                f"{a} has negative valuation; not an element of this integer ring")
        if self.base is None:
            if a == 0:
                return self.zero()
            vn = _val_int(a.numerator, self.p)
            vd = _val_int(a.denominator, self.p)
            num = a.numerator // self.p ** vn
            den = a.denominator // self.p ** vd
            mod = self.p ** self.W
            u = num * pow(den, -1, mod) % mod
            return ApproxElement(self, vn - vd, self.W, u)
        coeffs = [self.base.coerce_rational(a)]
        coeffs += [self.base.zero()] * (self.step_degree - 1)
        return _make_ext(self, tuple(coeffs))

    def coerce_from_base(self, x):
        if self.base is None:
            raise CoercionError("prime ring has no base to coerce from")
        if not x.ring.same_family(self.base):
            raise CoercionError("element does not belong to the base ring family")
        x = coerce(self.base, x)
        coeffs = (x,) + tuple(self.base.zero() for _ in range(self.step_degree - 1))
        return _make_ext(self, coeffs)

    def element_from_parts(self, v, k, u):
        """Raw prime-ring constructor from (weak valuation, rel precision, unit)."""
        if self.base is not None:
            raise XpadicError("element_from_parts is a prime-ring constructor")
        return _make_prime(self, v, k, u)


def make_prime_ring(p, W, *, family=None, field=True):
    """Q_p (or Z_p) at working precision W digits, in a fresh family by default."""
    if not is_probable_prime(p):
        raise XpadicError(f"{p} is not prime")
    if W < 1:
        raise XpadicError("working precision must be at least 1")
    if family is None:
        family = RingFamily(p, label=f"{'Q' if field else 'Z'}{p}")
    return ApproxRing(p, W, family=family, field=field)


def extend(base, g, mode, *, family=None):
    """Extension of `base` by the polynomial g, in the given mode.

    g must be monic of degree >= 2 and satisfy the Eisenstein (val 1
    constant term, val >= 1 elsewhere) or inertial (integral, irreducible
    mod pi) condition at the precision it carries.
    """
    if mode not in ("unramified", "eisenstein"):
        raise XpadicError(f"unknown extension mode {mode!r}")
    if g.ring is not base and not g.ring.same_family(base):
        raise XpadicError("defining polynomial is not over the base ring")
    d = g.degree
    if d < 2:
        raise XpadicError("extension degree must be at least 2")
    lead = g.coeffs[-1]
    if lead.is_weakly_zero() or lead.v != 0 or not weakly_equal(lead, base.one()):
        raise XpadicError("defining polynomial must be monic")
    ok, why = check_extension_condition(g, mode)
    if not ok:
        raise XpadicError(f"polynomial fails the {mode} condition: {why}")
    A = g.min_abs_precision()
    if A is INF:
        raise XpadicError("defining polynomial carries no finite precision")
    e_step = d if mode == "eisenstein" else 1
    W = e_step * A
    if family is None:
        family = RingFamily(base.p, label=f"{mode}-ext")
    return ApproxRing(base.p, W, base=base, defining=g, mode=mode,
                      family=family, field=base.field)


def check_extension_condition(g, mode):
    """Decide the Eisenstein/inertial condition from g's current precision.

    Returns (True, None) when certified, (False, reason) when refuted, and
    raises XpadicError("undecided...") when g is too imprecise to tell.
    """
    d = g.degree
    if mode == "eisenstein":
        c0 = g.coeffs[0]
        if c0.valuation_known():
            if c0.v != 1:
                return False, f"constant term has valuation {c0.v}, need 1"
        elif c0.abs_precision() <= 1:
            raise XpadicError("undecided: constant term precision too low")
        else:
            return False, "constant term is weakly zero beyond valuation 1"
        for i in range(1, d):
            c = g.coeffs[i]
            if c.v < 1 and not c.is_weakly_zero():
                return False, f"coefficient {i} has valuation {c.v} < 1"
            if c.v < 1:
                raise XpadicError("undecided: coefficient precision too low")
        return True, None
    # unramified / inertial
    for i in range(d):
        c = g.coeffs[i]
        if c.v < 0 and not c.is_weakly_zero():
            return False, f"coefficient {i} is not integral"
        if c.v < 0:
            raise XpadicError("undecided: coefficient precision too low")
        if not c.is_precise_zero() and c.abs_precision() < 1:
            raise XpadicError("undecided: coefficient precision too low")
    F = g.ring.residue_field()
    fbar = [c.residue() for c in g.coeffs]
    if not residue.is_irreducible(F, fbar):
        return False, "reducible modulo the maximal ideal"
    return True, None


def change_precision(R, W):
    """The W-digit member of R's family."""
    if W < 1:
        raise XpadicError("working precision must be at least 1")
    if R.base is None:
        return ApproxRing(R.p, W, family=R.family, field=R.field)
    A = -(-W // R.e_step)  # base digits needed
    g = R.defining
    if g.min_abs_precision() < A:
        if R.family.provider is not None:
            g = R.family.provider(A)
        else:
            raise XpadicError(
                "requested precision exceeds the defining polynomial's precision")
    base = change_precision(R.base, A)
    g = g.coerce_to(base)
    return ApproxRing(R.p, R.e_step * A, base=base, defining=g, mode=R.mode,
                      family=R.family, field=R.field)


# ---------------------------------------------------------------------------
# elements


class ApproxElement:
    """A finite-precision p-adic number; immutable after construction."""

    __slots__ = ("ring", "v", "k", "u")

    def __init__(self, ring, v, k, u):
        self.ring = ring
        self.v = v
        self.k = k
        self.u = u

    # -- predicates and views ----------------------------------------------

    def is_weakly_zero(self):
        return self.k == 0

    def is_precise_zero(self):
        return self.v is INF

    def valuation_known(self):
        return self.k > 0 or self.v is INF

    def abs_precision(self):
        return self.v + self.k if self.v is not INF else INF

    def residue(self):
        """Image of an integral element in the residue field."""
        F = self.ring.residue_field()
        if self.v is INF or self.v > 0:
            return F.zero()
        if self.v < 0:
            raise XpadicError("residue of a non-integral element")
        if self.k == 0:
            raise XpadicError("residue undefined: element is weakly zero at valuation 0")
        if self.ring.base is None:
            return self.u % self.ring.p
        if self.ring.mode == "eisenstein":
            return self.u[0].residue()
        return tuple(c.residue() for c in self.u)

    def __repr__(self):
        return f"<{render(self)}>"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        x, y = _align(self, _lift(self, other))
        return _add(x, y)

    __radd__ = __add__

    def __neg__(self):
        if self.ring.base is None:
            if self.v is INF or self.k == 0:
                return self
            return _make_prime(self.ring, self.v, self.k, -self.u)
        return _make_ext(self.ring, tuple(-c for c in self.u))

    def __sub__(self, other):
        return self + (-_lift(self, other))

    def __rsub__(self, other):
        return _lift(self, other) - self

    def __mul__(self, other):
        x, y = _align(self, _lift(self, other))
        return _mul(x, y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        x, y = _align(self, _lift(self, other))
        return _div(x, y)

    def __rtruediv__(self, other):
        return _lift(self, other) / self

    def __pow__(self, n):
        return _pow(self, n)

    def shift_by_uniformizer(self, n):
        """Multiply by pi^n (n may be negative in a field)."""
        if n == 0 or self.v is INF:
            return self
        if self.ring.base is None:
            return ApproxElement(self.ring, self.v + n, self.k, self.u)
        pi = self.ring.uniformizer()
        if n > 0:
            return self * _pow(pi, n)
        return self / _pow(pi, -n)


def _lift(model, value):
    if isinstance(value, ApproxElement):
        return value
    if isinstance(value, (int, Fraction)):
        return model.ring.coerce_rational(value)
    raise TypeError(f"cannot combine ApproxElement with {type(value).__name__}")


def _align(x, y):
    """Bring two family members to the same working precision (the smaller)."""
    if x.ring is y.ring:
        return x, y
    if not x.ring.same_family(y.ring):
        raise XpadicError("elements belong to different ring families")
    if x.ring.W == y.ring.W:
        return x, y
    if x.ring.W > y.ring.W:
        return coerce(y.ring, x), y
    return x, coerce(x.ring, y)


def _make_prime(ring, v, k, u):
    """Normalize: cap k at W, reduce u, shift v past leading zero digits."""
    if v is INF:
        return ApproxElement(ring, INF, 0, 0)
    p = ring.p
    k = min(k, ring.W)
    if k <= 0:
        return ApproxElement(ring, v, 0, 0)
    u %= p ** k
    if u == 0:
        return ApproxElement(ring, v + k, 0, 0)
    t = 0
    while u % p == 0:
        u //= p
        t += 1
    return ApproxElement(ring, v + t, k - t, u)


def _ext_weights(ring):
    if ring.mode == "eisenstein":
        return ring.e_step, lambda i: i
    return 1, lambda i: 0


def _make_ext(ring, coeffs):
    """Normalize an extension element given as a coefficient vector.

    For an Eisenstein step the term c_i * pi^i has valuation
    e*val(c_i) + i, and these are pairwise distinct mod e, so the minimum
    over the terms is exact. For an unramified step the coefficients are
    independent coordinates and the valuation is their minimum.
    """
    scale, weight = _ext_weights(ring)
    abs_p = INF
    v_raw = INF
    for i, c in enumerate(coeffs):
        if c.v is INF:
            continue
        abs_p = min(abs_p, scale * c.abs_precision() + weight(i))
        v_raw = min(v_raw, scale * c.v + weight(i))
    if abs_p is INF:
        return ApproxElement(ring, INF, 0, coeffs)
    if v_raw < abs_p:
        v, k = v_raw, abs_p - v_raw
    else:
        v, k = abs_p, 0
    if k > ring.W:
        coeffs = _truncate_vector(ring, coeffs, v + ring.W)
        k = ring.W
    return ApproxElement(ring, v, k, coeffs)


def _truncate_vector(ring, coeffs, A):
    scale, weight = _ext_weights(ring)
    out = []
    for i, c in enumerate(coeffs):
        cap = -(-(A - weight(i)) // scale)
        out.append(truncate_abs(c, cap))
    return tuple(out)


def truncate_abs(x, A):
    """Forget digits at or above pi^A. The precise zero is left precise."""
    if x.v is INF:
        return x
    ring = x.ring
    if ring.base is None:
        new_abs = min(x.abs_precision(), A)
        if new_abs <= x.v:
            return ApproxElement(ring, new_abs, 0, 0)
        k = new_abs - x.v
        return ApproxElement(ring, x.v, k, x.u % ring.p ** k)
    return _make_ext(ring, _truncate_vector(ring, x.u, A))


def coerce(R, x):
    """Coerce x into the family member R by digit truncation."""
    if not x.ring.same_family(R):
        raise CoercionError("element belongs to a different ring family")
    if x.ring is R:
        return x
    if R.base is None:
        k = min(x.k, R.W)
        if x.v is INF:
            return ApproxElement(R, INF, 0, 0)
        if k == 0:
            return ApproxElement(R, x.v, 0, 0)
        return ApproxElement(R, x.v, k, x.u % R.p ** k)
    coeffs = tuple(coerce(R.base, c) for c in x.u)
    return _make_ext(R, coeffs)


def _add(x, y):
    ring = x.ring
    if ring.base is not None:
        return _make_ext(ring, tuple(a + b for a, b in zip(x.u, y.u)))
    if x.v is INF:
        return y
    if y.v is INF:
        return x
    p = ring.p
    abs_p = min(x.abs_precision(), y.abs_precision())
    vmin = min(x.v, y.v)
    m = abs_p - vmin
    s = x.u * p ** (x.v - vmin) + y.u * p ** (y.v - vmin)
    return _make_prime(ring, vmin, m, s)


def _mul(x, y):
    ring = x.ring
    if ring.base is not None:
        return _make_ext(ring, _vector_mul(ring, x.u, y.u))
    if x.v is INF or y.v is INF:
        return ring.zero()
    k = min(x.k, y.k)
    return _make_prime(ring, x.v + y.v, k, x.u * y.u)


def _vector_mul(ring, a, b):
    d = ring.step_degree
    base = ring.base
    raw = [base.zero()] * (2 * d - 1)
    for i, x in enumerate(a):
        if x.v is INF:
            continue
        for j, y in enumerate(b):
            raw[i + j] = raw[i + j] + x * y
    g = ring.defining.coeffs
    for i in range(len(raw) - 1, d - 1, -1):
        c = raw[i]
        if c.v is INF:
            continue
        for j in range(d):
            raw[i - d + j] = raw[i - d + j] - c * g[j]
    return tuple(raw[:d])


def _div(x, y):
    ring = x.ring
    if y.is_weakly_zero():
        raise WeaklyZeroDivisionError(
            "division by a weakly zero element (divisor not certified nonzero)")
    if x.v is INF:
        return ring.zero()
    if ring.base is None:
        if x.k == 0:
            v = x.v - y.v
            if v < 0 and not ring.field:
                raise CoercionError("division leaves the integer ring")
            return ApproxElement(ring, v, 0, 0)
        k = min(x.k, y.k)
        mod = ring.p ** k
        u = x.u * pow(y.u % mod, -1, mod) % mod
        v = x.v - y.v
        if v < 0 and not ring.field:
            raise CoercionError("division leaves the integer ring")
        return _make_prime(ring, v, k, u)
    return _solve_mul(ring, y, x)


def _solve_mul(ring, y, x):
    """Solve y*z = x by Gaussian elimination on y's multiplication matrix,
    pivoting on the entry of smallest weak valuation."""
    d = ring.step_degree
    cols = [list(y.u)]
    for _ in range(d - 1):
        prev = cols[-1]
        shifted = [ring.base.zero()] + prev[:-1]
        top = prev[-1]
        g = ring.defining.coeffs
        if top.v is not INF:
            for j in range(d):
                shifted[j] = shifted[j] - top * g[j]
        cols.append(shifted)
    # rows of the system: sum_j M[i][j] z_j = x_i
    M = [[cols[j][i] for j in range(d)] for i in range(d)]
    rhs = list(x.u)
    perm = list(range(d))
    for col in range(d):
        pivot_row, pivot_val = None, INF
        for r in range(col, d):
            entry = M[r][col]
            if not entry.is_weakly_zero() and entry.v < pivot_val:
                pivot_row, pivot_val = r, entry.v
        if pivot_row is None:
            raise XpadicError("division lost all precision (singular system)")
        M[col], M[pivot_row] = M[pivot_row], M[col]
        rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        inv = M[col][col]
        for r in range(d):
            if r == col:
                continue
            factor = M[r][col] / inv
            if factor.v is INF:
                continue
            for c in range(col, d):
                M[r][c] = M[r][c] - factor * M[col][c]
            rhs[r] = rhs[r] - factor * rhs[col]
    z = [rhs[i] / M[i][i] for i in range(d)]
    return _make_ext(ring, tuple(z))


def _pow(x, n):
    ring = x.ring
    if not isinstance(n, int):
        raise TypeError("exponents must be integers")
    if n == 0:
        return ring.one()
    if n < 0:
        return _pow(ring.one() / x, -n)
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        base = base * base
        n >>= 1
    return result


def arith(op, x, y=None):
    """Named dispatch over the element operations."""
    if op == "neg":
        return -x
    if op == "pow":
        return _pow(x, y)
    ops = {"add": lambda a, b: a + b, "sub": lambda a, b: a - b,
           "mul": lambda a, b: a * b, "div": lambda a, b: a / b}
    return ops[op](x, _lift(x, y))


def weakly_equal(x, y):
    """True iff x - y is weakly zero at the common precision."""
    x, y = _align(x, _lift(x, y))
    return (x - y).is_weakly_zero()


def inspect(x):
    """(weak valuation, abs precision, rel precision, weakly zero,
    precise zero, valuation known)."""
    return (x.v, x.abs_precision(), x.k, x.is_weakly_zero(),
            x.is_precise_zero(), x.valuation_known())


# ---------------------------------------------------------------------------
# rendering


def _level_names(ring):
    names = []
    r = ring
    while r.base is not None:
        names.append("pi" if r.mode == "eisenstein" else "a")
        r = r.base
    names.reverse()
    depth = len(names)
    if depth > 1:
        names = [f"{n}{i+1}" for i, n in enumerate(names)]
    return names


def render(x):
    """Canonical series form over the prime ring; coefficient form in towers."""
    ring = x.ring
    if x.is_precise_zero():
        return "0"
    if ring.base is None:
        p = ring.p
        if x.k == 0:
            return f"O({p}^{x.v})"
        terms = []
        u = x.u
        for i in range(x.k):
            u, digit = divmod(u, p)
            if digit == 0:
                continue
            e = x.v + i
            if e == 0:
                terms.append(str(digit))
            elif e == 1:
                terms.append(f"{p}" if digit == 1 else f"{digit}*{p}")
            else:
                terms.append(f"{p}^{e}" if digit == 1 else f"{digit}*{p}^{e}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({p}^{x.abs_precision()})"
    name = _level_names(ring)[-1]
    parts = []
    for i, c in enumerate(x.u):
        if c.is_precise_zero():
            continue
        inner = render(c)
        if i == 0:
            parts.append(f"({inner})")
        elif i == 1:
            parts.append(f"({inner})*{name}")
        else:
            parts.append(f"({inner})*{name}^{i}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# polynomials over an ApproxRing


class ApproxPoly:
    """Univariate polynomial with ApproxElement coefficients.

    The coefficient count is structural: a leading coefficient may be
    weakly zero, and the length never changes under arithmetic that
    preserves it (add pads to the longer input).
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise XpadicError("a polynomial needs at least one coefficient")
        for c in coeffs:
            if not c.ring.same_family(ring):
                raise XpadicError("coefficient from a different ring family")
        self.ring = ring
        self.coeffs = tuple(coerce(ring, c) for c in coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def min_abs_precision(self):
        return min((c.abs_precision() for c in self.coeffs), default=INF)

    def coerce_to(self, R):
        return ApproxPoly(R, tuple(coerce(R, c) for c in self.coeffs))

    def __repr__(self):
        return f"ApproxPoly[{render_poly(self)}]"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [self.ring.zero()] * (n - len(self.coeffs))
        b = list(other.coeffs) + [self.ring.zero()] * (n - len(other.coeffs))
        return ApproxPoly(self.ring, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return ApproxPoly(self.ring, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        zero = self.ring.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.v is INF:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ApproxPoly(self.ring, tuple(out))

    def derivative(self):
        if len(self.coeffs) == 1:
            return ApproxPoly(self.ring, (self.ring.zero(),))
        return ApproxPoly(self.ring, tuple(
            i * c for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, a):
        acc = self.ring.zero()
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def shift_argument(self, a):
        """f(x + a), by Horner steps on the coefficient list."""
        zero = self.ring.zero()
        acc = [zero]
        for c in reversed(self.coeffs):
            # acc := acc*(x + a) + c
            nxt = [zero] * (len(acc) + 1)
            for i, t in enumerate(acc):
                nxt[i + 1] = nxt[i + 1] + t
                nxt[i] = nxt[i] + t * a
            nxt[0] = nxt[0] + c
            acc = nxt
        return ApproxPoly(self.ring, tuple(acc[: len(self.coeffs)]))

    def scale(self, j, t):
        """pi^j * f(pi^t * x)."""
        return ApproxPoly(self.ring, tuple(
            c.shift_by_uniformizer(j + t * i) for i, c in enumerate(self.coeffs)))


def weakly_equal_poly(f, g):
    if len(f.coeffs) != len(g.coeffs):
        n = max(len(f.coeffs), len(g.coeffs))
        fc = list(f.coeffs) + [f.ring.zero()] * (n - len(f.coeffs))
        gc = list(g.coeffs) + [g.ring.zero()] * (n - len(g.coeffs))
    else:
        fc, gc = f.coeffs, g.coeffs
    return all(weakly_equal(a, b) for a, b in zip(fc, gc))


def render_poly(f):
    parts = []
    for i, c in enumerate(f.coeffs):
        if c.is_precise_zero():
            continue
        body = render(c)
        if i == 0:
            parts.append(f"({body})")
        elif i == 1:
            parts.append(f"({body})*x")
        else:
            parts.append(f"({body})*x^{i}")
    return " + ".join(parts) if parts else "0"


class ApproxPolyRing:
    """Marker object for R[x] over an ApproxRing; mostly identity data."""

    __slots__ = ("base",)

    def __init__(self, base):
        self.base = base

    @property
    def family(self):
        return self.base.family

    def same_family(self, other):
        return self.base.same_family(other.base)

    def __repr__(self):
        return f"PolyRing over {self.base!r}"
