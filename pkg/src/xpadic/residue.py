"""Finite residue fields F_q, possibly built as towers over F_p.

Elements of the prime field are plain ints in [0, p); elements of an
extension are tuples of base-field elements (coefficients of the residue
generator). Only the small amount of arithmetic needed by the p-adic layer
is provided: ring operations, inversion, and irreducibility testing for
defining polynomials of unramified extensions.
"""

from .errors import XpadicError


class FiniteField:
    """F_p, or an extension of another FiniteField by an irreducible polynomial."""

    def __init__(self, p, base=None, modulus=None):
        self.p = p
        self.base = base
        self.modulus = modulus  # tuple of base elements, monic, len = degree+1
        if base is None:
            self.degree = 1
            self.size = p
        else:
            self.degree = len(modulus) - 1
            self.size = base.size ** self.degree

    def __repr__(self):
        return f"FiniteField(size={self.size})"

    def zero(self):
        return 0 if self.base is None else (self.base.zero(),) * self.degree

    def one(self):
        if self.base is None:
            return 1 % self.p
        return (self.base.one(),) + (self.base.zero(),) * (self.degree - 1)

    def from_int(self, n):
        if self.base is None:
            return n % self.p
        return (self.base.from_int(n),) + (self.base.zero(),) * (self.degree - 1)

    def is_zero(self, a):
        if self.base is None:
            return a == 0
        return all(self.base.is_zero(c) for c in a)

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self.base is None:
            return (a - b) % self.p
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self.base is None:
            return (-a) % self.p
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        raw = [self.base.zero()] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            for j, y in enumerate(b):
                raw[i + j] = self.base.add(raw[i + j], self.base.mul(x, y))
        # reduce modulo the (monic) defining polynomial
        for i in range(len(raw) - 1, self.degree - 1, -1):
            c = raw[i]
            if self.base.is_zero(c):
                continue
            for j in range(self.degree):
                raw[i - self.degree + j] = self.base.sub(
                    raw[i - self.degree + j], self.base.mul(c, self.modulus[j]))
        return tuple(raw[: self.degree])

    def pow(self, a, n):
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.base is None:
            return pow(a, -1, self.p)
        return self.pow(a, self.size - 2)


# -- polynomials over a FiniteField, as coefficient lists (low to high) --

def poly_trim(F, f):
    while len(f) > 1 and F.is_zero(f[-1]):
        f = f[:-1]
    return list(f)


def poly_mul(F, f, g):
    out = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(F, out)


def poly_mod(F, f, g):
    """Remainder of f modulo g; g need not be monic."""
    f = poly_trim(F, list(f))
    g = poly_trim(F, list(g))
    lead_inv = F.inv(g[-1])
    while len(f) >= len(g) and not (len(f) == 1 and F.is_zero(f[0])):
        c = F.mul(f[-1], lead_inv)
        shift = len(f) - len(g)
        for i in range(len(g)):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, g[i]))
        f = poly_trim(F, f)
        if len(f) < len(g):
            break
    return f


def poly_gcd(F, f, g):
    f, g = poly_trim(F, f), poly_trim(F, g)
    while not (len(g) == 1 and F.is_zero(g[0])):
        f, g = g, poly_mod(F, f, g)
    return f


def poly_powmod(F, f, n, g):
    result = [F.one()]
    f = poly_mod(F, f, g)
    while n:
        if n & 1:
            result = poly_mod(F, poly_mul(F, result, f), g)
        f = poly_mod(F, poly_mul(F, f, f), g)
        n >>= 1
    return result


def is_irreducible(F, f):
    """Distinct-degree style test: f of degree d >= 1 over F is irreducible
    iff gcd(x^(q^i) - x, f) is constant for all i <= d/2 (and f is not
    divisible by x^q - x spuriously at full degree)."""
    f = poly_trim(F, f)
    d = len(f) - 1
    if d < 1:
        raise XpadicError("irreducibility undefined for constants")
    if d == 1:
        return True
    x = [F.zero(), F.one()]
    for i in range(1, d // 2 + 1):
        xq = poly_powmod(F, x, F.size ** i, f)
        # xq - x
        diff = list(xq) + [F.zero()] * max(0, 2 - len(xq))
        diff[1] = F.sub(diff[1], F.one())
        diff = poly_trim(F, diff)
        g = poly_gcd(F, f, diff)
        if len(g) > 1:
            return False
    return True
