"""Sparse multivariate polynomials over Q or Q(alpha).

Terms are stored as a map from exponent tuples to nonzero coefficients.
A Laurent flag permits bounded negative exponents in the first variable,
which is how virtual transforms are tracked during blow-up substitutions.
Canonical printing uses graded lexicographic order (X > Y > Z).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotCoprime, ZeroPolynomial
from .fields import FieldElement, common_field, field_of, lift, render_scalar, scalar_inv
from .linalg import det_bareiss


class MultiPoly:
    __slots__ = ("vars", "terms", "field", "laurent")

    def __init__(self, vars, terms, field=None, laurent=False):
        self.vars = tuple(vars)
        self.field = field
        self.laurent = laurent
        clean = {}
        for exps, c in terms.items():
            c = lift(c, field)
            if not c:
                continue
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise ValueError("exponent tuple arity mismatch")
            if not laurent and any(e < 0 for e in exps):
                raise ValueError("negative exponent without the Laurent flag")
            clean[exps] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars, field=None):
        return cls(vars, {}, field)

    @classmethod
    def const(cls, vars, c, field=None):
        return cls(vars, {(0,) * len(vars): c}, field)

    @classmethod
    def variable(cls, vars, name, field=None):
        exps = [0] * len(vars)
        exps[tuple(vars).index(name)] = 1
        return cls(vars, {tuple(exps): 1}, field)

    @classmethod
    def monomial(cls, vars, exps, c=1, field=None, laurent=False):
        return cls(vars, {tuple(exps): c}, field, laurent)

    def to_field(self, field):
        if field == self.field:
            return self
        return MultiPoly(self.vars, self.terms, field, self.laurent)

    def rename(self, new_vars):
        assert len(new_vars) == len(self.vars)
        return MultiPoly(new_vars, self.terms, self.field, self.laurent)

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return len(self.terms) == 0 or (
            len(self.terms) == 1 and next(iter(self.terms)) == (0,) * len(self.vars)
        )

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), lift(0, self.field))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def order(self):
        """Minimal total degree of a term (multiplicity at the origin)."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Common total degree if homogeneous, else None (zero -> 0)."""
        if not self.terms:
            return 0
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def degree_in(self, var):
        i = self.vars.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_exponent(self, var):
        i = self.vars.index(var)
        if not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), lift(0, self.field))

    def uses_var(self, var):
        i = self.vars.index(var)
        return any(e[i] for e in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.vars == other.vars
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def sort_key(self):
        def ckey(c):
            if isinstance(c, FieldElement):
                return tuple(c.coords)
            return (Fraction(c),)

        return tuple(sorted((e, ckey(c)) for e, c in self.terms.items()))

    # -- arithmetic -----------------------------------------------------------

    def _join(self, other):
        if not isinstance(other, MultiPoly):
            of = field_of(other)
            other = MultiPoly.const(self.vars, other, of if of is not None else self.field)
        if self.vars != other.vars:
            raise ValueError(f"mixed rings {self.vars} vs {other.vars}")
        f = common_field(self.field, other.field)
        return self.to_field(f), other.to_field(f), f

    def __add__(self, other):
        a, b, f = self._join(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.vars, terms, f, a.laurent or b.laurent)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, f = self._join(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) - c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.vars, terms, f, a.laurent or b.laurent)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()},
                         self.field, self.laurent)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            f = common_field(self.field, field_of(other))
            if not other:
                return MultiPoly.zero(self.vars, f)
            return MultiPoly(self.vars, {e: c * other for e, c in self.terms.items()},
                             f, self.laurent)
        a, b, f = self._join(other)
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(a.vars, out, f, a.laurent or b.laurent)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, var):
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.vars, out, self.field, self.laurent)

    # -- substitution -----------------------------------------------------------

    def substitute(self, mapping, new_vars, field=None, laurent=False):
        """Full substitution var -> polynomial/scalar in a fresh ring.

        Every variable of self must be mapped.  Negative exponents are
        allowed only when the replacement is a single term.
        """
        field = common_field(self.field, field)
        repl = []
        for v in self.vars:
            r = mapping[v]
            if not isinstance(r, MultiPoly):
                r = MultiPoly.const(new_vars, r, field_of(r))
            field = common_field(field, r.field)
            repl.append(r)
        repl = [r.to_field(field) for r in repl]
        acc = MultiPoly.zero(new_vars, field)
        power_cache = [dict() for _ in repl]

        def rpow(i, e):
            cache = power_cache[i]
            if e in cache:
                return cache[e]
            if e >= 0:
                val = repl[i] ** e
            else:
                r = repl[i]
                if len(r.terms) != 1:
                    raise ValueError("negative exponent on a non-monomial substitution")
                (exps, c), = r.terms.items()
                val = MultiPoly.monomial(new_vars, tuple(x * e for x in exps),
                                         scalar_inv(c) ** (-e), field, laurent=True)
            cache[e] = val
            return val

        for exps, c in self.terms.items():
            term = MultiPoly.const(new_vars, c, field_of(c))
            for i, e in enumerate(exps):
                if e:
                    term = term * rpow(i, e)
            acc = acc + term
        if laurent or any(e < 0 for t in acc.terms for e in t):
            acc = MultiPoly(acc.vars, acc.terms, acc.field, laurent=True)
        return acc

    def evaluate(self, point):
        """Evaluate at a scalar point given as {var: scalar}."""
        field = self.field
        for v in self.vars:
            field = common_field(field, field_of(point[v]))
        acc = lift(0, field)
        for exps, c in self.terms.items():
            term = lift(c, field) if field is not None else c
            for v, e in zip(self.vars, exps):
                if e:
                    x = point[v]
                    term = term * (x ** e if e >= 0 else scalar_inv(x) ** (-e))
            acc = acc + term
        return acc

    def eliminate(self, var, value):
        """Substitute var := value (scalar) and drop it from the ring."""
        i = self.vars.index(var)
        new_vars = self.vars[:i] + self.vars[i + 1 :]
        field = common_field(self.field, field_of(value))
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            c2 = lift(c, field)
            if e:
                c2 = c2 * (lift(value, field) ** e)
            ne = exps[:i] + exps[i + 1 :]
            s = out.get(ne, 0) + c2
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return MultiPoly(new_vars, out, field, self.laurent)

    def shift_var(self, var, k):
        """Multiply by var**k (k may be negative; marks the result Laurent)."""
        i = self.vars.index(var)
        out = {}
        for exps, c in self.terms.items():
            ne = list(exps)
            ne[i] += k
            out[tuple(ne)] = c
        laurent = self.laurent or any(e < 0 for t in out for e in t)
        return MultiPoly(self.vars, out, self.field, laurent)

    # -- division ---------------------------------------------------------------

    def leading_term(self):
        """Graded-lex leading (exps, coeff)."""
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    def divexact(self, other):
        """Exact division; raises ZeroPolynomial if not divisible."""
        a, b, f = self._join(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if a.is_zero():
            return a
        if b.is_constant():
            return a * scalar_inv(b.constant_value())
        if len(b.terms) == 1:
            (eb, cb), = b.terms.items()
            inv = scalar_inv(cb)
            out = {tuple(x - y for x, y in zip(e, eb)): c * inv
                   for e, c in a.terms.items()}
            laurent = a.laurent or any(x < 0 for e in out for x in e)
            if laurent and not a.laurent:
                raise ZeroPolynomial("division is not exact")
            return MultiPoly(a.vars, out, f, laurent)
        rem = a
        out = {}
        eb, cb = b.leading_term()
        cb_inv = scalar_inv(cb)
        # Laurent dividends have no monomial well-ordering; bound the loop.
        budget = None if not a.laurent else 64 * (len(a.terms) + len(b.terms) + 8) ** 2
        while rem:
            er, cr = rem.leading_term()
            qe = tuple(x - y for x, y in zip(er, eb))
            if any(q < 0 for q in qe) and not a.laurent:
                raise ZeroPolynomial("division is not exact")
            if budget is not None:
                budget -= 1
                if budget < 0:
                    raise ZeroPolynomial("division is not exact")
            qc = cr * cb_inv
            out[qe] = qc
            rem = rem - MultiPoly.monomial(a.vars, qe, qc, f, laurent=True) * b
        return MultiPoly(a.vars, out, f, a.laurent)

    # -- rendering ----------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, exps)
                if e
            )
            if isinstance(c, FieldElement) and not c.is_rational():
                cs = f"({render_scalar(c)})"
                body = f"{cs}*{mono}" if mono else cs
            else:
                cval = c.rational_value() if isinstance(c, FieldElement) else Fraction(c)
                if not mono:
                    body = str(cval)
                elif cval == 1:
                    body = mono
                elif cval == -1:
                    body = f"-{mono}"
                else:
                    body = f"{cval}*{mono}"
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"MultiPoly({self.render()})"


# -- gcd machinery ---------------------------------------------------------------


def _univar_view(p, var):
    """Coefficients of p in powers of var, as polys in the same ring."""
    i = p.vars.index(var)
    slices = {}
    for exps, c in p.terms.items():
        d = exps[i]
        ne = list(exps)
        ne[i] = 0
        slices.setdefault(d, {})[tuple(ne)] = c
    return {
        d: MultiPoly(p.vars, t, p.field, p.laurent) for d, t in slices.items()
    }


def _coeff_in(p, var, d):
    i = p.vars.index(var)
    out = {}
    for exps, c in p.terms.items():
        if exps[i] == d:
            ne = list(exps)
            ne[i] = 0
            out[tuple(ne)] = c
    return MultiPoly(p.vars, out, p.field, p.laurent)


def _var_monomial(p, var, k):
    exps = [0] * len(p.vars)
    exps[p.vars.index(var)] = k
    return MultiPoly.monomial(p.vars, exps, 1, p.field)


def _normalize_unit(p):
    """Scale so the graded-lex leading coefficient is 1."""
    if p.is_zero():
        return p
    _, c = p.leading_term()
    if c == 1:
        return p
    return p * scalar_inv(c)


def _pseudo_rem(a, b, var):
    da, db = a.degree_in(var), b.degree_in(var)
    lb = _coeff_in(b, var, db)
    r = a
    while not r.is_zero() and r.degree_in(var) >= db:
        dr = r.degree_in(var)
        lr = _coeff_in(r, var, dr)
        r = lb * r - lr * _var_monomial(r, var, dr - db) * b
    return r


def _content_wrt(p, var):
    views = _univar_view(p, var)
    c = None
    for d in sorted(views):
        c = views[d] if c is None else mp_gcd(c, views[d])
        if c.is_constant():
            break
    return c


def mp_gcd(f, g):
    """Gcd of multivariate polynomials over a field, normalized so the
    graded-lex leading coefficient is 1 (primitive PRS algorithm)."""
    if f.is_zero():
        return _normalize_unit(g)
    if g.is_zero():
        return _normalize_unit(f)
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(f.vars, 1, common_field(f.field, g.field))
    f, g, _ = f._join(g)
    active = [v for v in f.vars if f.uses_var(v) or g.uses_var(v)]
    var = min(active, key=lambda v: max(f.degree_in(v), g.degree_in(v)))
    if not (f.uses_var(var) and g.uses_var(var)):
        # the chosen variable appears in only one of them
        cont = _content_wrt(f, var) if f.uses_var(var) else f
        other = g if f.uses_var(var) else _content_wrt(g, var)
        return mp_gcd(cont, other)
    cf = _content_wrt(f, var)
    cg = _content_wrt(g, var)
    pf = f.divexact(cf)
    pg = g.divexact(cg)
    c = mp_gcd(cf, cg)
    a, b = (pf, pg) if pf.degree_in(var) >= pg.degree_in(var) else (pg, pf)
    while True:
        if b.is_zero():
            prim = a.divexact(_content_wrt(a, var))
            return _normalize_unit(c * prim)
        if b.degree_in(var) == 0:
            return _normalize_unit(c)
        r = _pseudo_rem(a, b, var)
        if not r.is_zero():
            r = r.divexact(_content_wrt(r, var))
        a, b = b, r


def mp_gcd_many(polys):
    acc = None
    for p in polys:
        acc = p if acc is None else mp_gcd(acc, p)
        if acc.is_constant() and not acc.is_zero():
            break
    return acc


def coprime(f, g):
    return mp_gcd(f, g).is_constant()


def squarefree_part_2d(g):
    """Squarefree part of a bivariate germ: g / gcd(g, g_u, g_v)."""
    u, v = g.vars
    rad = mp_gcd_many([g, g.derivative(u), g.derivative(v)])
    return g.divexact(rad), rad


def resultant(f, g, var):
    """Resultant with respect to var: the determinant of the Sylvester
    matrix, computed by fraction-free elimination with exact division."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    f, g, field = f._join(g)
    m, n = f.degree_in(var), g.degree_in(var)
    if m == 0 and n == 0:
        return MultiPoly.const(f.vars, 1, field)
    fc = [_coeff_in(f, var, d) for d in range(m, -1, -1)]
    gc = [_coeff_in(g, var, d) for d in range(n, -1, -1)]
    size = m + n
    zero = MultiPoly.zero(f.vars, field)
    grid = []
    for i in range(n):
        row = [zero] * i + fc + [zero] * (size - i - m - 1)
        grid.append(row)
    for i in range(m):
        row = [zero] * i + gc + [zero] * (size - i - n - 1)
        grid.append(row)
    return det_bareiss(grid, exact_div=lambda a, b: a.divexact(b))


def to_unipoly(p, var):
    """Convert a MultiPoly that involves only `var` into a UniPoly."""
    from .unipoly import UniPoly

    i = p.vars.index(var)
    for exps in p.terms:
        if any(e for j, e in enumerate(exps) if j != i):
            raise ValueError("polynomial involves more than the given variable")
    if p.is_zero():
        return UniPoly.zero(p.field)
    d = p.degree_in(var)
    coeffs = [lift(0, p.field)] * (d + 1)
    for exps, c in p.terms.items():
        coeffs[exps[i]] = c
    return UniPoly(coeffs, p.field)


def from_unipoly(up, vars, var):
    terms = {}
    i = tuple(vars).index(var)
    for d, c in enumerate(up.coeffs):
        if c:
            exps = [0] * len(vars)
            exps[i] = d
            terms[tuple(exps)] = c
    return MultiPoly(vars, terms, up.field)
