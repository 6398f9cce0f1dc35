"""Simple algebraic extensions Q(alpha) in the power basis.

A NumberField is Q[t]/(m(t)) for a monic irreducible m over Q.  Elements
are coordinate vectors in the basis 1, alpha, ..., alpha^(e-1).  Exactly
one simple extension is in play for any given value; towers are never
built (combining elements of two distinct fields raises MixedFields).
The rationals themselves are represented by field ``None`` throughout the
package, with plain Fraction scalars.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import MixedFields, NotSquarefreeExtension

Rat = Fraction


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a, b):
    # Coefficient lists over Fraction, ascending degree; b nonzero.
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv
        if f:
            q[i] = f
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return q, _poly_trim(a)


def _poly_ext_gcd(a, b):
    # Returns (g, u, v) with u*a + v*b = g, all ascending Fraction lists.
    r0, r1 = _poly_trim(a), _poly_trim(b)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        v0, v1 = v1, _poly_sub(v0, _poly_mul(q, v1))
    return r0, u0, v0


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


class NumberField:
    """Q(alpha) for alpha a root of a monic irreducible polynomial over Q."""

    __slots__ = ("minpoly", "degree", "_reduction", "symbol")

    def __init__(self, minpoly, symbol="a", check_irreducible=True):
        coeffs = tuple(Fraction(c) for c in minpoly)
        coeffs = tuple(_poly_trim(list(coeffs)))
        if len(coeffs) < 3:
            raise ValueError("extension degree must be at least 2 (use None for Q)")
        if coeffs[-1] != 1:
            coeffs = tuple(c / coeffs[-1] for c in coeffs)
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.symbol = symbol
        if check_irreducible:
            from .unipoly import UniPoly, factor_rational

            facs = factor_rational(UniPoly(coeffs))
            if len(facs) != 1 or facs[0][1] != 1:
                raise NotSquarefreeExtension(
                    f"defining polynomial is not irreducible over Q: {list(coeffs)}"
                )
        # alpha^e, ..., alpha^(2e-2) in the power basis, for products.
        e = self.degree
        red = []
        cur = [-c for c in self.minpoly[:-1]]
        red.append(tuple(cur))
        for _ in range(e - 2):
            cur = [Fraction(0)] + cur
            if len(cur) > e:
                top = cur.pop()
                if top:
                    for i in range(e):
                        cur[i] += top * red[0][i]
            cur += [Fraction(0)] * (e - len(cur))
            red.append(tuple(cur))
        self._reduction = tuple(red)

    def element(self, x):
        """Coerce an int/Fraction/FieldElement into this field."""
        if isinstance(x, FieldElement):
            if x.field is not self and x.field != self:
                raise MixedFields("cannot move an element between extensions")
            return x
        coords = [Fraction(x)] + [Fraction(0)] * (self.degree - 1)
        return FieldElement(self, tuple(coords))

    def gen(self):
        coords = [Fraction(0)] * self.degree
        coords[1] = Fraction(1)
        return FieldElement(self, tuple(coords))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        from .unipoly import UniPoly

        return f"Q[{self.symbol}]/({UniPoly(self.minpoly).render(self.symbol)})"


class FieldElement:
    """Element of a NumberField, stored as power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(coords)
        if len(self.coords) != field.degree:
            raise ValueError("coordinate vector has the wrong length")

    # -- coercion -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return None

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return FieldElement(self.field, tuple(a * f for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = self.field.degree
        conv = [Fraction(0)] * (2 * e - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    conv[i + j] += a * b
        out = conv[:e]
        red = self.field._reduction
        for i in range(e, 2 * e - 1):
            c = conv[i]
            if c:
                row = red[i - e]
                for j in range(e):
                    out[j] += c * row[j]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        g, u, _ = _poly_ext_gcd(list(self.coords), list(self.field.minpoly))
        # g is a nonzero constant since the minimal polynomial is irreducible.
        scale = 1 / g[0]
        u = [c * scale for c in u]
        u += [Fraction(0)] * (self.field.degree - len(u))
        return FieldElement(self.field, tuple(u[: self.field.degree]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure ------------------------------------------------------

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field.minpoly, self.coords))

    def is_rational(self):
        return not any(self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def __repr__(self):
        return f"<{render_scalar(self)}>"


# -- helpers used across the package -------------------------------------


def lift(x, field):
    """Coerce x (int/Fraction/FieldElement) into the scalar domain of
    ``field`` (None meaning plain Fractions)."""
    if field is None:
        if isinstance(x, FieldElement):
            return x.rational_value()
        return Fraction(x)
    return field.element(x)


def field_of(x):
    return x.field if isinstance(x, FieldElement) else None


def common_field(f1, f2):
    """Join of two scalar domains; raises MixedFields for two distinct
    extensions."""
    if f1 is None:
        return f2
    if f2 is None or f1 == f2:
        return f1
    raise MixedFields(f"cannot mix {f1!r} and {f2!r}")


def scalar_inv(x):
    if isinstance(x, FieldElement):
        return x.inverse()
    return 1 / Fraction(x)


def render_scalar(x, symbol=None):
    """Canonical text form: Fractions as p/q, field elements as a t-polynomial."""
    if isinstance(x, FieldElement):
        sym = symbol or x.field.symbol
        parts = []
        for i, c in enumerate(x.coords):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                var = sym if i == 1 else f"{sym}^{i}"
                if c == 1:
                    parts.append(var)
                elif c == -1:
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{c}*{var}")
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text
    return str(Fraction(x))


def normalized_pair(delta, rho):
    """Reduce an integer pair to lowest terms keeping rho positive."""
    g = gcd(abs(delta), abs(rho))
    delta, rho = delta // g, rho // g
    if rho < 0:
        delta, rho = -delta, -rho
    return delta, rho
