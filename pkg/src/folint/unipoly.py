"""Univariate polynomials over Q or over one simple extension Q(alpha).

Provides exact gcd, Yun squarefree decomposition, factorization over Q
(rational roots, closed degree <= 3 criteria, then Kronecker's exhaustive
interpolation method up to a configurable degree cap) and Trager-style
factorization over Q(alpha) via norms, which is what locates singular
points with algebraic coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd as int_gcd, isqrt

from .errors import FactorDegreeCap, ZeroPolynomial
from .fields import FieldElement, NumberField, common_field, field_of, lift

DEFAULT_FACTOR_CAP = 8

# values whose divisor sets we refuse to enumerate (trial division bound)
_TRIAL_LIMIT = 10**6


class UniPoly:
    """Dense univariate polynomial; coeffs ascending, no trailing zeros."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=None):
        cs = [lift(c, field) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field=None):
        return cls((), field)

    @classmethod
    def const(cls, c, field=None):
        return cls((c,), field)

    @classmethod
    def x(cls, field=None):
        return cls((0, 1), field)

    def to_field(self, field):
        if field == self.field:
            return self
        return UniPoly(self.coeffs, field)

    # -- basic structure --------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def lc(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.coeffs == other.coeffs
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.coeffs, None if self.field is None else self.field.minpoly))

    def sort_key(self):
        def ckey(c):
            if isinstance(c, FieldElement):
                return tuple(c.coords)
            return (Fraction(c),)

        return (self.degree(), tuple(ckey(c) for c in self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def _join(self, other):
        if not isinstance(other, UniPoly):
            of = field_of(other)
            other = UniPoly.const(other, of if of is not None else self.field)
        f = common_field(self.field, other.field)
        return self.to_field(f), other.to_field(f), f

    def __add__(self, other):
        a, b, f = self._join(other)
        n = max(len(a.coeffs), len(b.coeffs))
        za = list(a.coeffs) + [lift(0, f)] * (n - len(a.coeffs))
        for i, c in enumerate(b.coeffs):
            za[i] = za[i] + c
        return UniPoly(za, f)

    def __sub__(self, other):
        a, b, f = self._join(other)
        n = max(len(a.coeffs), len(b.coeffs))
        za = list(a.coeffs) + [lift(0, f)] * (n - len(a.coeffs))
        for i, c in enumerate(b.coeffs):
            za[i] = za[i] - c
        return UniPoly(za, f)

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs), self.field)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return UniPoly(tuple(c * other for c in self.coeffs),
                           common_field(self.field, field_of(other)))
        a, b, f = self._join(other)
        if a.is_zero() or b.is_zero():
            return UniPoly.zero(f)
        out = [lift(0, f)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, ca in enumerate(a.coeffs):
            if ca:
                for j, cb in enumerate(b.coeffs):
                    out[i + j] = out[i + j] + ca * cb
        return UniPoly(out, f)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = UniPoly.const(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        a, b, f = self._join(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(a.coeffs)
        db, lb = b.degree(), b.lc()
        q = [lift(0, f)] * max(0, len(r) - db)
        for i in range(len(r) - db - 1, -1, -1):
            c = r[i + db] / lb
            if c:
                q[i] = c
                for j, cb in enumerate(b.coeffs):
                    r[i + j] = r[i + j] - c * cb
        return UniPoly(q, f), UniPoly(r[:db], f)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero() or self.lc() == 1:
            return self
        inv = self.lc()
        return UniPoly(tuple(c / inv for c in self.coeffs), self.field)

    def derivative(self):
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i), self.field)

    def eval(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return lift(0, self.field)
        return acc

    def shift(self, c):
        """f(y + c) by Horner; c may live in an extension of the base."""
        f = common_field(self.field, field_of(c))
        acc = UniPoly.zero(f)
        lin = UniPoly((c, 1), f)
        for coeff in reversed(self.coeffs):
            acc = acc * lin + UniPoly.const(coeff, f)
        return acc

    def render(self, var="x"):
        from .fields import render_scalar

        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                head = render_scalar(c)
            else:
                v = var if i == 1 else f"{var}^{i}"
                if c == 1:
                    head = v
                elif c == -1:
                    head = f"-{v}"
                else:
                    cs = render_scalar(c)
                    if isinstance(c, FieldElement) and not c.is_rational():
                        cs = f"({cs})"
                    head = f"{cs}*{v}"
            parts.append(head)
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"UniPoly({self.render()})"


def poly_gcd(a, b):
    """Monic gcd by the Euclidean algorithm (coefficients form a field)."""
    a, b, f = a._join(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else UniPoly.zero(f)


def squarefree_decomposition(f):
    """Yun's algorithm: returns [(g_i, i)] with f = lc * prod g_i^i,
    the g_i monic, squarefree and pairwise coprime."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of 0")
    f = f.monic()
    if f.degree() == 0:
        return []
    df = f.derivative()
    g = poly_gcd(f, df)
    b = f // g
    c = df // g
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(f):
    return UniPoly.const(1, f.field) * _prod(
        [g for g, _ in squarefree_decomposition(f)], f.field
    )


def _prod(polys, field):
    acc = UniPoly.const(1, field)
    for p in polys:
        acc = acc * p
    return acc


# -- factorization over Q ---------------------------------------------------


def _clear_denominators(f):
    """Primitive integer coefficient list for a rational UniPoly."""
    den = 1
    for c in f.coeffs:
        c = Fraction(c)
        den = den * c.denominator // int_gcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in f.coeffs]
    content = 0
    for c in ints:
        content = int_gcd(content, abs(c))
    if content > 1:
        ints = [c // content for c in ints]
    return ints


def _divisors(n):
    n = abs(n)
    if n == 0:
        raise ZeroDivisionError
    out = []
    f = 1
    rest = n
    small = []
    p = 2
    while p <= _TRIAL_LIMIT and p * p <= rest:
        while rest % p == 0:
            small.append(p)
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        if rest > _TRIAL_LIMIT * _TRIAL_LIMIT:
            raise FactorDegreeCap(
                f"divisor enumeration needs factoring {rest}, beyond the trial bound"
            )
        small.append(rest)
    divs = {1}
    for prime in small:
        divs |= {d * prime for d in divs}
    return sorted(divs)


def _rational_roots(ints):
    """All rational roots of a primitive integer-coefficient polynomial."""
    k = 0
    while ints[k] == 0:
        k += 1
    roots = [Fraction(0)] * (1 if k else 0)
    body = ints[k:]
    if len(body) == 1:
        return roots
    a0, an = body[0], body[-1]
    seen = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in seen:
                    continue
                seen.add(cand)
                acc = 0
                for c in reversed(body):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return roots


def _interpolate(points, values):
    """Lagrange interpolation, returns a rational UniPoly."""
    n = len(points)
    acc = UniPoly.zero()
    for i in range(n):
        num = UniPoly.const(Fraction(values[i]))
        for j in range(n):
            if j != i:
                num = num * UniPoly((Fraction(-points[j]), Fraction(1)))
                num = num * Fraction(1, points[i] - points[j])
        acc = acc + num
    return acc


def _kronecker_split(ints, cap):
    """One nontrivial integer factor of a squarefree primitive integer
    polynomial without rational roots, or None if irreducible."""
    n = len(ints) - 1
    if n > cap:
        raise FactorDegreeCap(
            f"irreducibility test needs degree {n} > cap {cap}"
        )
    f = UniPoly([Fraction(c) for c in ints])
    pts_pool = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5]
    for k in range(2, n // 2 + 1):
        pts = pts_pool[: k + 1]
        vals = [int(f.eval(Fraction(p))) for p in pts]
        divisor_sets = []
        for v in vals:
            ds = _divisors(v)
            divisor_sets.append([d for s in (1, -1) for d in (s * e for e in ds)])
        # fix the sign of the first value: g and -g divide together
        divisor_sets[0] = [d for d in divisor_sets[0] if d > 0]
        for combo in product(*divisor_sets):
            g = _interpolate(pts, combo)
            if g.degree() != k:
                continue
            if any(Fraction(c).denominator != 1 for c in g.coeffs):
                continue
            q, r = f.divmod(g)
            if r.is_zero():
                return g
    return None


def factor_rational(f, cap=DEFAULT_FACTOR_CAP):
    """Factor a nonzero rational UniPoly into monic irreducibles.

    Returns a list of (factor, multiplicity) sorted canonically; the
    product of factor^mult equals f up to a rational constant.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if f.field is not None:
        raise ValueError("factor_rational expects rational coefficients")
    result = {}
    for g, mult in squarefree_decomposition(f):
        for irr in _factor_squarefree(g, cap):
            result[irr] = result.get(irr, 0) + mult
    return sorted(result.items(), key=lambda kv: kv[0].sort_key())


def _factor_squarefree(g, cap):
    ints = _clear_denominators(g)
    out = []
    for r in _rational_roots(ints):
        out.append(UniPoly((-r, Fraction(1))))
    if out:
        rem = g
        for lin in out:
            rem = rem // lin
    else:
        rem = g
    stack = [rem.monic()] if rem.degree() > 0 else []
    while stack:
        h = stack.pop()
        if h.degree() <= 0:
            continue
        if h.degree() <= 3:
            # no rational roots remain, so degrees 2 and 3 are irreducible
            out.append(h.monic())
            continue
        split = _kronecker_split(_clear_denominators(h), cap)
        if split is None:
            out.append(h.monic())
        else:
            stack.append(split)
            stack.append(h // split)
    return out


def is_irreducible(f, cap=DEFAULT_FACTOR_CAP):
    if f.degree() <= 0:
        return False
    facs = factor_rational(f, cap)
    return len(facs) == 1 and facs[0][1] == 1 and facs[0][0].degree() == f.degree()


# -- factorization over Q(alpha) --------------------------------------------


def field_norm(g):
    """Norm of g in K[y] down to Q[y]: the determinant of multiplication
    by g on K[y] viewed as a free module over Q[y]."""
    K = g.field
    if K is None:
        return g
    e = K.degree
    cols = []
    for i in range(e):
        gi = g * K.gen() ** i
        col = [[Fraction(0)] * (gi.degree() + 1) for _ in range(e)]
        for j, c in enumerate(gi.coeffs):
            for r in range(e):
                col[r][j] = c.coords[r]
        cols.append([UniPoly(row) for row in col])
    grid = [[cols[i][r] for i in range(e)] for r in range(e)]
    return _poly_det(grid)


def _poly_det(grid):
    n = len(grid)
    if n == 1:
        return grid[0][0]
    acc = UniPoly.zero()
    for i in range(n):
        if grid[i][0]:
            minor = [row[1:] for k, row in enumerate(grid) if k != i]
            term = grid[i][0] * _poly_det(minor)
            acc = acc + term if i % 2 == 0 else acc - term
    return acc


def factor_over_field(g, cap=DEFAULT_FACTOR_CAP):
    """Factor a nonzero UniPoly over its own field into monic irreducibles
    (Trager's norm method when the field is a proper extension)."""
    if g.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if g.field is None:
        return factor_rational(g, cap)
    result = {}
    for h, mult in squarefree_decomposition(g):
        for irr in _trager_squarefree(h, cap):
            result[irr] = result.get(irr, 0) + mult
    return sorted(result.items(), key=lambda kv: kv[0].sort_key())


def _trager_squarefree(h, cap):
    K = h.field
    if h.degree() == 1:
        return [h.monic()]
    alpha = K.gen()
    for s in range(0, 20):
        shifted = h.shift(-s * alpha) if s else h
        norm = field_norm(shifted)
        if norm.degree() != h.degree() * K.degree:
            continue  # degenerate leading behaviour, try another shift
        if poly_gcd(norm, norm.derivative()).degree() > 0:
            continue
        pieces = []
        for irr, _ in factor_rational(norm, cap):
            cand = poly_gcd(h, irr.to_field(K).shift(s * alpha))
            if cand.degree() > 0:
                pieces.append(cand.monic())
        total = sum(p.degree() for p in pieces)
        if total == h.degree():
            return sorted(pieces, key=lambda p: p.sort_key())
    raise FactorDegreeCap("no squarefree norm found for Trager factorization")


def roots_in_field(g, cap=DEFAULT_FACTOR_CAP):
    """All roots of g lying in g's own coefficient field.

    Returns (roots, nonlinear) where nonlinear lists the irreducible
    factors of degree >= 2 (whose roots would need a bigger field).
    """
    roots = []
    nonlinear = []
    for irr, _ in factor_over_field(g, cap):
        if irr.degree() == 1:
            roots.append(-irr.coeffs[0])
        else:
            nonlinear.append(irr)
    return roots, nonlinear
