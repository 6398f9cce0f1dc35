"""Projective 1-forms A dX + B dY + C dZ, wedge products, chart views.

The Euler condition X*A + Y*B + Z*C = 0 is what makes a homogeneous
triple a well-defined form on the projective plane; it also means the
form is recoverable from any affine chart, so charts are derived views
and the projective triple is the primary state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EulerViolation, InhomogeneousInput, NotCoprime, UnequalDegrees
from .fields import common_field, field_of
from .poly import MultiPoly, coprime, mp_gcd_many

PROJ_VARS = ("X", "Y", "Z")

# chart id -> (variable set to 1, affine var names, indices of the two
# surviving form components among (A, B, C))
CHARTS = {
    "z": ("Z", ("x", "y"), (0, 1)),
    "y": ("Y", ("x", "z"), (0, 2)),
    "x": ("X", ("y", "z"), (1, 2)),
}


@dataclass(frozen=True)
class TwoForm:
    c_xy: MultiPoly
    c_yz: MultiPoly
    c_xz: MultiPoly

    def is_zero(self):
        return self.c_xy.is_zero() and self.c_yz.is_zero() and self.c_xz.is_zero()

    def witness(self):
        """One surviving monomial, as (component, monomial text)."""
        for name, comp in (("dX^dY", self.c_xy), ("dY^dZ", self.c_yz),
                           ("dX^dZ", self.c_xz)):
            if not comp.is_zero():
                exps, c = comp.leading_term()
                mono = MultiPoly.monomial(comp.vars, exps, c, comp.field)
                return name, mono.render()
        return None


@dataclass(frozen=True)
class AffineOneForm:
    """a dx + b dy in the chart's affine coordinates."""

    a: MultiPoly
    b: MultiPoly
    chart: str

    @property
    def vars(self):
        return CHARTS[self.chart][1]


def euler_check(A, B, C):
    """Check X*A + Y*B + Z*C = 0; returns (True, None) or (False, witness)."""
    degs = set()
    for p in (A, B, C):
        d = p.homogeneous_degree()
        if d is None:
            raise InhomogeneousInput(f"component is not homogeneous: {p.render()}")
        if not p.is_zero():
            degs.add(d)
    if len(degs) > 1:
        raise InhomogeneousInput(f"components have different degrees {sorted(degs)}")
    X, Y, Z = (MultiPoly.variable(PROJ_VARS, v) for v in PROJ_VARS)
    s = X * A + Y * B + Z * C
    if s.is_zero():
        return True, None
    exps, c = s.leading_term()
    return False, MultiPoly.monomial(s.vars, exps, c, s.field).render()


class ProjOneForm:
    """Validated homogeneous 1-form with gcd(A,B,C) constant."""

    __slots__ = ("A", "B", "C", "degree", "field", "normalization_note")

    def __init__(self, A, B, C, normalization_note=None):
        self.A, self.B, self.C = A, B, C
        self.degree = A.homogeneous_degree()
        self.field = A.field
        self.normalization_note = normalization_note

    @classmethod
    def build(cls, A, B, C):
        """Validate and normalize a raw component triple."""
        field = common_field(common_field(A.field, B.field), C.field)
        A, B, C = (p.to_field(field) for p in (A, B, C))
        if A.is_zero() and B.is_zero() and C.is_zero():
            raise InhomogeneousInput("the zero form does not define a foliation")
        note = None
        g = mp_gcd_many([p for p in (A, B, C) if not p.is_zero()])
        if not g.is_constant():
            A, B, C = (p.divexact(g) for p in (A, B, C))
            note = f"common factor {g.render()} divided out"
        ok, witness = euler_check(A, B, C)
        if not ok:
            raise EulerViolation(f"X*A + Y*B + Z*C has surviving monomial {witness}")
        return cls(A, B, C, note)

    def components(self):
        return (self.A, self.B, self.C)

    def scale(self, c):
        return ProjOneForm(self.A * c, self.B * c, self.C * c,
                           self.normalization_note)

    def __repr__(self):
        return (f"ProjOneForm(A={self.A.render()}, B={self.B.render()}, "
                f"C={self.C.render()})")


def foliation_degree(form):
    """Degree r of the foliation: component degree minus one."""
    return form.degree - 1


def wedge(eta, omega):
    """Wedge product of two projective 1-forms (eta may be a raw triple)."""
    P, Q, R = eta.components() if isinstance(eta, ProjOneForm) else eta
    A, B, C = omega.components() if isinstance(omega, ProjOneForm) else omega
    return TwoForm(P * B - Q * A, Q * C - R * B, P * C - R * A)


def pencil_differential(F, G):
    """Numerator triple of d(F/G): (G dF - F dG) componentwise.

    The result satisfies the Euler identity, hence defines a projective
    1-form after removing any common factor.
    """
    dF = F.homogeneous_degree()
    dG = G.homogeneous_degree()
    if dF is None or dG is None:
        raise InhomogeneousInput("pencil generators must be homogeneous")
    if dF != dG or F.is_zero() or G.is_zero():
        raise UnequalDegrees(f"degrees {dF} and {dG} differ")
    if not coprime(F, G):
        raise NotCoprime("pencil generators share a non-constant factor")
    P = G * F.derivative("X") - F * G.derivative("X")
    Q = G * F.derivative("Y") - F * G.derivative("Y")
    R = G * F.derivative("Z") - F * G.derivative("Z")
    return (P, Q, R)


def chart_restrict(obj, chart):
    """Affine view on one of the three standard charts.

    For a polynomial, substitutes the chart variable by 1 and renames to
    the chart's affine variables.  For a projective 1-form, returns the
    pair (a, b) following the convention omega = a dx + b dy with
    x = X/Z, y = Y/Z on the chart z (and cyclically).
    """
    one_var, affine_vars, comp_idx = CHARTS[chart]
    if isinstance(obj, ProjOneForm):
        comps = obj.components()
        a = chart_restrict(comps[comp_idx[0]], chart)
        b = chart_restrict(comps[comp_idx[1]], chart)
        return AffineOneForm(a, b, chart)
    return obj.eliminate(one_var, 1).rename(affine_vars)


def translate_to_origin(f, p):
    """Germ of an affine polynomial at p, in local variables (u, v)."""
    field = f.field
    for c in p:
        field = common_field(field, field_of(c))
    u = MultiPoly.variable(("u", "v"), "u", field)
    v = MultiPoly.variable(("u", "v"), "v", field)
    x1, x2 = f.vars
    return f.substitute({x1: u + p[0], x2: v + p[1]}, ("u", "v"), field)


def homogenize(f, chart, degree=None):
    """Inverse of chart_restrict on polynomials (when no chart-variable
    factor was lost): pads each term with the chart variable."""
    one_var, affine_vars, _ = CHARTS[chart]
    assert tuple(f.vars) == tuple(affine_vars)
    d = f.total_degree() if degree is None else degree
    pos = {v: PROJ_VARS.index(v.upper()) for v in affine_vars}
    fill = PROJ_VARS.index(one_var)
    terms = {}
    for exps, c in f.terms.items():
        ne = [0, 0, 0]
        for v, e in zip(affine_vars, exps):
            ne[pos[v]] = e
        ne[fill] = d - sum(exps)
        if ne[fill] < 0:
            raise InhomogeneousInput("target degree below the affine degree")
        terms[tuple(ne)] = c
    return MultiPoly(PROJ_VARS, terms, f.field)
