"""Newton polygons from partial-precision data, Hensel root lifting, and
factorization along polygon segments.

The polygon of an exact polynomial is pinned down between two hulls
computed from a single approximation: the lower polygon uses the weak
valuations of all coefficients (lower bounds on the truth), the upper
polygon only the coefficients whose valuation is exactly known. Wherever
the two agree they equal the true polygon, so refinement proceeds epoch by
epoch until they do.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import lazy, rings
from .approx import INF, ApproxPoly, _make_prime, weakly_equal
from .errors import PrecisionBudgetError, ValidationError, XpadicError

# ---------------------------------------------------------------------------
# hulls


def _turn(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def lower_hull(points):
    """Monotone-chain lower hull; collinear middle points are dropped, so
    faces are maximal."""
    hull = []
    for pt in points:
        while len(hull) >= 2 and _turn(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class Face:
    i0: int
    v0: Fraction
    i1: int
    v1: Fraction

    @property
    def width(self):
        return self.i1 - self.i0

    @property
    def slope(self):
        return Fraction(self.v1 - self.v0, self.i1 - self.i0)

    @property
    def root_valuation(self):
        return -self.slope

    @property
    def ramification_denominator(self):
        return self.slope.denominator

    def __repr__(self):
        return (f"Face[({self.i0},{self.v0})->({self.i1},{self.v1}), "
                f"slope {self.slope}, width {self.width}]")


class NewtonPolygon:
    """Lower convex hull in (index, valuation) space, as a vertex list."""

    def __init__(self, vertices, resolved_epoch=None):
        self.vertices = [tuple(v) for v in vertices]
        self.resolved_epoch = resolved_epoch
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            if i1 <= i0:
                raise XpadicError("polygon vertices must increase in index")

    @property
    def faces(self):
        return [Face(i0, v0, i1, v1)
                for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:])]

    def evaluate(self, x):
        """Value of the polygon as a function on [first index, last index]."""
        x = Fraction(x)
        if not self.vertices:
            raise XpadicError("empty polygon")
        if x < self.vertices[0][0] or x > self.vertices[-1][0]:
            raise XpadicError("argument outside the polygon's span")
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            if i0 <= x <= i1:
                return Fraction(v0) + Fraction(v1 - v0, i1 - i0) * (x - i0)
        return Fraction(self.vertices[-1][1])

    def __eq__(self, other):
        return isinstance(other, NewtonPolygon) and self.vertices == other.vertices

    def __repr__(self):
        return f"NewtonPolygon({self.vertices})"


@dataclass
class PolygonPair:
    """Lower and upper polygons of one approximation, sandwiching the truth."""

    lower: NewtonPolygon
    upper: NewtonPolygon | None

    @property
    def resolved(self):
        return self.upper is not None and self.lower.vertices == self.upper.vertices

    def agreement_intervals(self):
        """Maximal intervals on which lower and upper provably coincide."""
        if self.upper is None:
            return []
        lo, up = self.lower, self.upper
        xs = sorted({Fraction(v[0]) for v in lo.vertices}
                    | {Fraction(v[0]) for v in up.vertices})
        xs = [x for x in xs if up.vertices[0][0] <= x <= up.vertices[-1][0]
              and lo.vertices[0][0] <= x <= lo.vertices[-1][0]]
        intervals = []
        current = None
        for a, b in zip(xs, xs[1:]):
            same = (lo.evaluate(a) == up.evaluate(a)
                    and lo.evaluate(b) == up.evaluate(b))
            if same:
                if current is None:
                    current = [a, b]
                else:
                    current[1] = b
            elif current is not None:
                intervals.append(tuple(current))
                current = None
        if current is not None:
            intervals.append(tuple(current))
        return intervals


def lower_upper_polygons(fa):
    """The pair of polygons of a single approximate polynomial.

    Weakly zero coefficients enter the lower polygon at their absolute
    precision (all that is known is val >= that); only coefficients with
    known valuation enter the upper polygon. Precise zeros constrain
    nothing and are skipped.
    """
    lower_pts, upper_pts = [], []
    for i, c in enumerate(fa.coeffs):
        if c.is_precise_zero():
            continue
        lower_pts.append((i, c.v))
        if c.valuation_known():
            upper_pts.append((i, c.v))
    if not lower_pts:
        raise XpadicError("all coefficients are weakly zero")
    lower = NewtonPolygon(lower_hull(lower_pts))
    upper = NewtonPolygon(lower_hull(upper_pts)) if upper_pts else None
    return PolygonPair(lower, upper)


def newton_polygon(f, budget=None):
    """The exact Newton polygon of a nonzero exact polynomial.

    Runs through epochs until the lower and upper polygons agree, then
    returns the common polygon (resolved_epoch records when).
    """
    limit = budget if budget is not None else lazy.max_epoch()
    for n in range(1, limit + 1):
        fa = f.approx_at(n, budget=limit)
        try:
            pair = lower_upper_polygons(fa)
        except XpadicError:
            continue
        if pair.resolved:
            return NewtonPolygon(pair.lower.vertices, resolved_epoch=n)
    raise PrecisionBudgetError(
        f"Newton polygon unresolved after {limit} epochs "
        "(some coefficient's valuation never became known)",
        epochs_tried=limit)


# ---------------------------------------------------------------------------
# generalized Hensel lifting


def _ceil_frac(q):
    return -((-q.numerator) // q.denominator) if isinstance(q, Fraction) else math.ceil(q)


def _hensel_certificate(fa):
    """Decide from one approximation whether the first face of the polygon
    has width one.

    Returns ("yes", (t, j)) with the scaling of the integral-model
    iteration, ("no", None), or (None, None) when undecided. The yes test
    needs only partial information: val of coefficient 1 known, and every
    later point's weak valuation strictly above the ray through (1, v1)
    of slope (v1 - w0).
    """
    coeffs = fa.coeffs
    if len(coeffs) < 2:
        return "no", None
    c1 = coeffs[1]
    if c1.is_precise_zero():
        return "no", None
    if c1.valuation_known():
        v1 = c1.v
        w0 = INF if coeffs[0].is_precise_zero() else coeffs[0].v
        ok = True
        for i in range(2, len(coeffs)):
            ci = coeffs[i]
            wi = INF if ci.is_precise_zero() else ci.v
            if not wi - v1 > (v1 - w0) * (i - 1):
                ok = False
                break
        if ok:
            t = (w0 - v1 - 1) if w0 is not INF else 0
            j = -(t + v1)
            return "yes", (int(t), int(j))
    # refute only from a fully resolved polygon
    try:
        pair = lower_upper_polygons(fa)
    except XpadicError:
        return None, None
    if pair.resolved:
        first = pair.lower.faces[0] if pair.lower.faces else None
        if first is None or first.i0 != 0 or first.width != 1:
            return "no", None
        return None, None  # width one but v1 not known yet; keep refining
    return None, None


def _lift_root(K, F, t, j, counter):
    """Newton iteration on the scaled model g(x) = pi^j F(pi^t x).

    val(g(0)) >= 1 = is the slack s; each step at least doubles
    val(g(y)), so the loop is logarithmic in the working precision.
    """
    g = F.scale(j, t)
    gprime = g.derivative()
    target = K.W
    y = K.zero()
    steps = 0
    while True:
        gy = g.evaluate(y)
        if gy.is_precise_zero() or gy.is_weakly_zero() or gy.v >= target:
            break
        gpy = gprime.evaluate(y)
        if gpy.is_weakly_zero():
            raise ValidationError(
                "derivative became weakly zero during Hensel lifting")
        y = y - gy / gpy
        steps += 1
        if steps > 2 * max(target, 2).bit_length() + 8:
            raise ValidationError("Hensel iteration failed to converge")
    counter.append(steps)
    return y


def is_hensel_liftable(f, a, budget=None):
    """Whether Newton iteration from `a` converges to a single root of f.

    Equivalent to: among the roots b of f, val(a - b) is maximized exactly
    once; tested as "the first face of the polygon of f(x+a) has width 1",
    decided from partial polygon data. On success also returns the root as
    an exact element whose approximations run the iteration on the scaled
    integral model, with min_epoch the certification epoch.
    """
    if not isinstance(a, rings.ExactElement):
        a = rings.elt_from(f.base_structure, a)
    limit = budget if budget is not None else lazy.max_epoch()
    F = f.shift(a)
    verdict, data = None, None
    cert_epoch = None
    for n in range(1, limit + 1):
        fa = F.approx_at(n, budget=limit)
        verdict, data = _hensel_certificate(fa)
        if verdict is not None:
            cert_epoch = n
            break
    if verdict is None:
        raise PrecisionBudgetError(
            f"Hensel condition undecided after {limit} epochs",
            epochs_tried=limit)
    if verdict == "no":
        return False, None
    t, j = data
    K = f.base_structure
    iteration_counts = []

    def ga(dep_values):
        Ka, Fa, aa = dep_values
        y = _lift_root(Ka, Fa, t, j, iteration_counts)
        return aa + y.shift_by_uniformizer(t)

    root = rings.make_user_element(K, ga, [K, F, a], min_epoch=cert_epoch)
    root.hensel_iteration_counts = iteration_counts
    root.certification_epoch = cert_epoch
    return True, root


# ---------------------------------------------------------------------------
# segment factorization


@dataclass
class SegmentSplitResult:
    factors: list
    status: str  # "split" | "irreducible" | "inconclusive"
    polygon: NewtonPolygon
    detail: str = ""
    min_epoch: int | None = None
    vertex_epochs: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.factors)


# -- integer polynomial helpers for the two-factor lift (prime field only) --


def _ip_trim(f):
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def _ip_mul(a, b, M):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % M
    return _ip_trim(out)


def _ip_add(a, b, M):
    n = max(len(a), len(b))
    return _ip_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % M
                     for i in range(n)])


def _ip_sub(a, b, M):
    n = max(len(a), len(b))
    return _ip_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % M
                     for i in range(n)])


def _ip_divmod_monic(a, g, M):
    """Quotient and remainder of a by the monic polynomial g, mod M."""
    a = [c % M for c in a]
    dg = len(g) - 1
    if len(a) <= dg:
        return [0], _ip_trim(a)
    q = [0] * (len(a) - dg)
    for i in range(len(a) - 1, dg - 1, -1):
        c = a[i] % M
        if c:
            q[i - dg] = c
            for k in range(dg + 1):
                a[i - dg + k] = (a[i - dg + k] - c * g[k]) % M
    return _ip_trim(q), _ip_trim(a[:dg] or [0])


def _series_inverse(c, m, p):
    """First m coefficients of 1/c(x) over F_p (c[0] invertible)."""
    inv0 = pow(c[0] % p, -1, p)
    t = [0] * m
    t[0] = inv0
    for i in range(1, m):
        acc = 0
        for l in range(1, min(i, len(c) - 1) + 1):
            acc += c[l] * t[i - l]
        t[i] = (-inv0 * acc) % p
    return _ip_trim(t)


def _pair_lift(g_int, m, p, kappa):
    """Lift the factorization g == x^m * c(x) mod p to modulus p^kappa.

    Returns (G, H) with G monic of degree m, H of degree <= deg(g) - m,
    G*H == g mod p^kappa. The Bezout pair is lifted alongside, and the
    residue seed is recomputed from scratch on every call (no reuse of
    earlier lifts).
    """
    D = len(g_int) - 1
    cbar = [c % p for c in g_int[m:]]
    if cbar[0] % p == 0:
        raise XpadicError("vertex data inconsistent: c(0) vanishes mod p")
    for i in range(m):
        if g_int[i] % p:
            raise XpadicError("vertex data inconsistent: low terms not divisible")
    T = _series_inverse(cbar, m, p)
    prod = _ip_mul(T, cbar, p)
    S = _ip_trim([(-prod[i]) % p for i in range(m, len(prod))]) if len(prod) > m else [0]
    G = [0] * m + [1]
    H = list(cbar)
    cur = 1
    while cur < kappa:
        nxt = min(2 * cur, kappa)
        M = p ** nxt
        e = _ip_sub(g_int, _ip_mul(G, H, M), M)
        q, dg = _ip_divmod_monic(_ip_mul(T, e, M), G, M)
        dh = _ip_add(_ip_mul(S, e, M), _ip_mul(q, H, M), M)
        G = _ip_add(G, dg, M)
        H = _ip_add(H, dh, M)
        if len(H) > D - m + 1:
            for c in H[D - m + 1:]:
                if c % M:
                    raise ValidationError("two-factor lift produced degree overflow")
            H = _ip_trim(H[: D - m + 1])
        if len(G) != m + 1 or G[-1] != 1:
            raise ValidationError("two-factor lift lost monicity")
        if nxt < kappa:
            b = _ip_sub(_ip_add(_ip_mul(S, G, M), _ip_mul(T, H, M), M), [1], M)
            one_minus_b = _ip_sub([1], b, M)
            t_raw = _ip_mul(T, one_minus_b, M)
            q2, T = _ip_divmod_monic(t_raw, G, M)
            S = _ip_add(_ip_mul(S, one_minus_b, M), _ip_mul(q2, H, M), M)
        cur = nxt
    return G, H


def _poly_points(fa):
    pts = []
    for i, c in enumerate(fa.coeffs):
        if not c.is_precise_zero():
            pts.append((i, c.v))
    return pts


def _split_once(fa):
    """One two-factor split of an approximate polynomial at the first
    interior vertex of its polygon. Returns (first-face factor, rest),
    both monic."""
    R = fa.ring
    if R.base is not None:
        raise XpadicError("segment splitting runs over the prime field only")
    p = R.p
    lead = fa.coeffs[-1]
    if lead.is_weakly_zero():
        raise XpadicError("leading coefficient is weakly zero")
    if not weakly_equal(lead, R.one()):
        inv = R.one() / lead
        fa = ApproxPoly(R, tuple(c * inv for c in fa.coeffs))
    hull = lower_hull(_poly_points(fa))
    if len(hull) < 3:
        raise XpadicError("no interior vertex to split at")
    (i0, v0), (m, vm), (i2, v2) = hull[0], hull[1], hull[2]
    sigma_l = Fraction(vm - v0, m - i0)
    sigma_r = Fraction(v2 - vm, i2 - m)
    t = _ceil_frac(-sigma_r)
    if not t < -sigma_l:
        raise XpadicError(
            "no integral scaling separates this vertex (needs ramified methods)")
    j = -(vm + t * m)
    D = len(fa.coeffs) - 1
    kappa = INF
    for i, c in enumerate(fa.coeffs):
        if c.is_precise_zero():
            continue
        kappa = min(kappa, c.abs_precision() + j + t * i)
    kappa = int(kappa)
    if kappa < 1:
        raise XpadicError("not enough precision to split at this vertex")
    g_int = []
    for i, c in enumerate(fa.coeffs):
        if c.is_precise_zero() or c.is_weakly_zero():
            g_int.append(0)
            continue
        height = c.v + j + t * i
        if height < 0:
            raise XpadicError("vertex data inconsistent: negative height")
        g_int.append(c.u * p ** height % p ** kappa)
    G, H = _pair_lift(g_int, m, p, kappa)
    a_coeffs = []
    for i in range(m + 1):
        gi = G[i] if i < len(G) else 0
        a_coeffs.append(_make_prime(R, 0, kappa, gi).shift_by_uniformizer(t * (m - i)))
    a_coeffs[m] = R.one()
    b_coeffs = []
    for i in range(D - m + 1):
        hi = H[i] if i < len(H) else 0
        b_coeffs.append(_make_prime(R, 0, kappa, hi).shift_by_uniformizer(vm - t * i))
    if not weakly_equal(b_coeffs[D - m], R.one()):
        raise ValidationError("second factor failed to come out monic")
    b_coeffs[D - m] = R.one()
    return ApproxPoly(R, tuple(a_coeffs)), ApproxPoly(R, tuple(b_coeffs))


def _vertex_certification_epoch(f, vertex, up_to):
    """First epoch at which the vertex is a known-valuation corner of the
    lower polygon (hence a corner of the true polygon)."""
    m, vm = vertex
    for n in range(1, up_to + 1):
        fa = f.approx_at(n)
        if m >= len(fa.coeffs):
            continue
        c = fa.coeffs[m]
        if not (c.valuation_known() and not c.is_precise_zero() and c.v == vm):
            continue
        hull = lower_hull(_poly_points(fa))
        if (m, vm) in hull[1:-1]:
            return n
    return up_to


def segment_split(f, budget=None):
    """Factor f along the faces of its Newton polygon.

    Returns one monic exact factor per face when every interior vertex
    admits an integral scaling; a single-face polygon yields either an
    irreducibility certificate (width equal to the slope's denominator
    forces total ramification of that degree) or the "requires further
    methods" signal. Each factor's approximations redo the residue split
    and quadratic lift at the epoch's working precision.
    """
    poly = newton_polygon(f, budget)
    faces = poly.faces
    PR = f.parent_ring
    if len(faces) <= 1:
        if not faces:
            return SegmentSplitResult([f], "inconclusive", poly,
                                      detail="degenerate polygon")
        face = faces[0]
        spans = face.i0 == 0 and face.i1 == f.degree_bound
        if spans and face.ramification_denominator == face.width:
            return SegmentSplitResult(
                [f], "irreducible", poly,
                detail=(f"single face of slope {face.slope}: the slope "
                        f"denominator equals the degree, forcing a totally "
                        f"ramified extension of degree {face.width}"))
        return SegmentSplitResult(
            [f], "inconclusive", poly,
            detail="single face; splitting it needs methods beyond polygons")
    if f.base_structure.base is not None:
        return SegmentSplitResult(
            [f], "inconclusive", poly,
            detail="segment splitting over extensions needs residual "
                   "polynomials over extension residue fields")
    for left, right in zip(faces, faces[1:]):
        t = _ceil_frac(-right.slope)
        if not t < -left.slope:
            return SegmentSplitResult(
                [f], "inconclusive", poly,
                detail=f"vertex between slopes {left.slope} and {right.slope} "
                       "admits no integral scaling")
    vertex_epochs = {}
    for face in faces[:-1]:
        vertex = (face.i1, face.v1)
        vertex_epochs[vertex] = _vertex_certification_epoch(
            f, vertex, poly.resolved_epoch)
    min_epoch = max(vertex_epochs.values())
    n_faces = len(faces)
    factors = []
    for r, face in enumerate(faces):
        def ga(dep_values, r=r):
            fa = dep_values[0]
            piece = fa
            for _ in range(r):
                _, piece = _split_once(piece)
            if r < n_faces - 1:
                piece, _ = _split_once(piece)
            return piece

        node = lazy.make_user_node(PR.node, ga, (f.node,),
                                   min_epoch=min_epoch,
                                   type_tag=lazy.TYPE_POLY)
        factors.append(rings.ExactPoly(node, PR, face.width))
    return SegmentSplitResult(factors, "split", poly,
                              detail=f"split into {n_faces} face factors",
                              min_epoch=min_epoch,
                              vertex_epochs=vertex_epochs)
