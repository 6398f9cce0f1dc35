"""Foliation-level analysis: the singular locus over computable subfields,
Milnor numbers, eigenvalue-pair classification and the cardinality bound.

Singular points are grouped into Galois conjugacy classes over the base
field; each class stores one representative with coordinates in a single
simple extension and the class size (= residue field degree).  A point
whose eigenvalue ratio is a positive rational is non-reduced; any point
whose ratio fails to be rational sets a global obstruction flag, since
algebraic integrability forces integer eigenvalue pairs everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DegenerateFoliation, SingularJacobian, UnsupportedExtension
from .fields import (FieldElement, NumberField, field_of, lift, normalized_pair,
                     render_scalar)
from .forms import CHARTS, ProjOneForm, chart_restrict, foliation_degree, \
    translate_to_origin
from .poly import MultiPoly, resultant, to_unipoly
from .unipoly import DEFAULT_FACTOR_CAP, UniPoly, factor_over_field, poly_gcd, \
    roots_in_field

DEFAULT_JET_CAP = 20


class Foliation:
    """A validated projective 1-form together with its degree."""

    __slots__ = ("form", "r", "field", "_chart_cache")

    def __init__(self, form: ProjOneForm):
        self.form = form
        self.r = foliation_degree(form)
        self.field = form.field
        self._chart_cache = {}

    @classmethod
    def from_components(cls, A, B, C):
        return cls(ProjOneForm.build(A, B, C))

    def chart_pair(self, chart):
        if chart not in self._chart_cache:
            self._chart_cache[chart] = chart_restrict(self.form, chart)
        return self._chart_cache[chart]

    def local_pair(self, point):
        """Translated chart pair (a, b) as germs at the point, in (u, v)."""
        af = self.chart_pair(point.chart)
        a = translate_to_origin(af.a.to_field(point.field), point.coords)
        b = translate_to_origin(af.b.to_field(point.field), point.coords)
        return a, b

    def __repr__(self):
        return f"Foliation(r={self.r})"


class IrrationalRatio:
    """Marker: the eigenvalue ratio at a singularity is not rational."""

    __slots__ = ("s",)

    def __init__(self, s):
        self.s = s  # trace^2 / det, kept for diagnostics

    def __repr__(self):
        return f"IrrationalRatio(s={render_scalar(self.s)})"


def eigen_ratio(M):
    """Eigenvalue pair (delta, rho) of a 2x2 matrix, in coprime integers.

    Computes s = trace^2/det, which determines the unordered ratio pair
    {x, 1/x} via x^2 - (s-2)x + 1 = 0.  Returns IrrationalRatio when s is
    not rational or the equation has no rational root.  The smaller root
    is taken, so a positive pair comes out ordered with rho >= delta and
    a mixed-sign pair with rho > 0.
    """
    (m00, m01), (m10, m11) = M
    T = m00 + m11
    D = m00 * m11 - m01 * m10
    if not D:
        raise SingularJacobian("zero determinant: eigenvalue ratio undefined")
    s = (T * T) / D
    if isinstance(s, FieldElement):
        if not s.is_rational():
            return IrrationalRatio(s)
        s = s.rational_value()
    s = Fraction(s)
    disc = s * (s - 4)
    if disc < 0:
        return IrrationalRatio(s)
    p, q = disc.numerator, disc.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp != p or rq * rq != q:
        return IrrationalRatio(s)
    root = Fraction(rp, rq)
    x = min((s - 2 + root) / 2, (s - 2 - root) / 2)
    return normalized_pair(x.numerator, x.denominator)


@dataclass(frozen=True)
class SingularPoint:
    """One representative of a Galois conjugacy class of singularities."""

    chart: str
    coords: tuple
    field: object  # NumberField or None
    size: int
    milnor: int
    eigen: object  # (delta, rho) or None when the ratio is irrational
    eigen_s: object
    non_reduced: bool
    jacobian: tuple

    @property
    def proj(self):
        """Projective coordinates (unnormalized chart form)."""
        c1, c2 = self.coords
        if self.chart == "z":
            return (c1, c2, 0 * c1 + 1)
        if self.chart == "y":
            return (c1, 0 * c1 + 1, c2)
        return (0 * c1 + 1, c1, c2)

    def sort_key(self):
        order = {"z": 0, "y": 1, "x": 2}

        def ckey(c):
            if isinstance(c, FieldElement):
                return (1,) + tuple(c.coords)
            return (0, Fraction(c))

        mp = () if self.field is None else self.field.minpoly
        return (order[self.chart], len(mp), mp, tuple(ckey(c) for c in self.coords))

    def render(self):
        parts = " : ".join(render_scalar(c) for c in self.proj)
        text = f"({parts})"
        if self.field is not None:
            text += f" where {UniPoly(self.field.minpoly).render(self.field.symbol)} = 0"
        return text


@dataclass
class SingularLocus:
    points: list  # class representatives in canonical order
    r: int

    def weighted_milnor_sum(self):
        return sum(p.size * p.milnor for p in self.points)

    def non_reduced(self):
        return [p for p in self.points if p.non_reduced]

    def reduced(self):
        return [p for p in self.points if not p.non_reduced]

    def irrational(self):
        return [p for p in self.points if p.eigen is None and p.milnor == 1]

    def n_non_reduced(self):
        """Geometric count of non-reduced points (class sizes summed)."""
        return sum(p.size for p in self.non_reduced())


def _x_classes(u, base, factor_cap):
    """Classes of roots of a univariate polynomial over the base field.

    Yields (root, field, size); an irreducible factor of degree >= 2 over
    a base that is already an extension raises UnsupportedExtension.
    """
    out = []
    for phi, _ in factor_over_field(u, factor_cap):
        if phi.degree() == 1:
            out.append((-phi.coeffs[0], base, 1))
        elif base is None:
            K = NumberField(phi.coeffs, check_irreducible=False)
            out.append((K.gen(), K, phi.degree()))
        else:
            raise UnsupportedExtension(
                "singular locus needs an extension of the declared field"
            )
    return out


def _y_points(x0, Kx, size, ay, by, base, factor_cap):
    """Second coordinates over the field of the first one."""
    if ay.is_zero() and by.is_zero():
        raise DegenerateFoliation("a whole line of singular points")
    g = poly_gcd(ay, by) if (ay and by) else (ay if by.is_zero() else by).monic()
    if g.degree() == 0:
        return []  # spurious resultant root
    roots, nonlinear = roots_in_field(g, factor_cap)
    pts = [((x0, y0), Kx, size) for y0 in roots]
    for psi in nonlinear:
        if Kx is not base or base is not None:
            raise UnsupportedExtension(
                "a singular point needs a second independent extension"
            )
        Ky = NumberField(psi.coeffs, check_irreducible=False)
        beta = Ky.gen()
        pts.append(((lift(x0, Ky), beta), Ky, psi.degree()))
    return pts


def _affine_common_zeros(a, b, base, factor_cap):
    """Conjugacy classes of common zeros of two affine polynomials."""
    vx, vy = a.vars
    if a.is_zero() and b.is_zero():
        raise DegenerateFoliation("both chart components vanish identically")
    if a.is_zero() or b.is_zero():
        nz = b if a.is_zero() else a
        if nz.is_constant():
            return []
        raise DegenerateFoliation("a chart component vanishes identically")
    a_y, b_y = a.uses_var(vy), b.uses_var(vy)
    out = []
    if not a_y and not b_y:
        g = poly_gcd(to_unipoly(a, vx), to_unipoly(b, vx))
        if g.degree() >= 1:
            raise DegenerateFoliation("vertical lines of singular points")
        return []
    if not a_y or not b_y:
        x_only, mixed = (a, b) if not a_y else (b, a)
        ux = to_unipoly(x_only, vx)
        if ux.degree() == 0:
            return []
        for x0, Kx, size in _x_classes(ux, base, factor_cap):
            my = to_unipoly(mixed.to_field(Kx).eliminate(vx, x0), vy)
            zero = UniPoly.zero(Kx)
            out.extend(_y_points(x0, Kx, size, my, zero, base, factor_cap))
        return out
    R = resultant(a, b, vy)
    if R.is_zero():
        raise DegenerateFoliation("the chart components share a common factor")
    ux = to_unipoly(R, vx)
    if ux.degree() == 0:
        return []
    for x0, Kx, size in _x_classes(ux, base, factor_cap):
        ay = to_unipoly(a.to_field(Kx).eliminate(vx, x0), vy)
        by = to_unipoly(b.to_field(Kx).eliminate(vx, x0), vy)
        out.extend(_y_points(x0, Kx, size, ay, by, base, factor_cap))
    return out


def _analyze_class(fol, chart, coords, K, size, jet_cap):
    af = fol.chart_pair(chart)
    vx, vy = af.vars
    a = af.a.to_field(K)
    b = af.b.to_field(K)
    point = {vx: coords[0], vy: coords[1]}
    assert not a.evaluate(point) and not b.evaluate(point), "not a singular point"
    ax, ay = a.derivative(vx).evaluate(point), a.derivative(vy).evaluate(point)
    bx, by = b.derivative(vx).evaluate(point), b.derivative(vy).evaluate(point)
    detj = ax * by - ay * bx
    M = ((-bx, -by), (ax, ay))
    if detj:
        milnor = 1
        ratio = eigen_ratio(M)
    else:
        from .resolution import colength

        ga = translate_to_origin(a, coords)
        gb = translate_to_origin(b, coords)
        milnor = colength([ga, gb], jet_cap)
        ratio = None
    if isinstance(ratio, tuple):
        delta, rho = ratio
        return SingularPoint(chart, tuple(coords), K, size, milnor,
                             (delta, rho), None, delta > 0 and rho > 0, M)
    eigen_s = ratio.s if isinstance(ratio, IrrationalRatio) else None
    return SingularPoint(chart, tuple(coords), K, size, milnor,
                         None, eigen_s, False, M)


def singular_locus(fol, factor_cap=DEFAULT_FACTOR_CAP, jet_cap=DEFAULT_JET_CAP):
    """All singular conjugacy classes, validated against r^2 + r + 1.

    Charts partition the plane: the affine chart z, the line Z = 0 with
    Y != 0, and the single point (1:0:0), so no deduplication is needed.
    """
    base = fol.field
    found = []
    af = fol.chart_pair("z")
    for coords, K, size in _affine_common_zeros(af.a, af.b, base, factor_cap):
        found.append(("z", coords, K, size))
    # points at infinity (X:1:0): common roots of all three components
    A, B, C = fol.form.components()
    restricted = [p.eliminate("Z", 0).eliminate("Y", 1).rename(("X",))
                  for p in (A, B, C)]
    if all(p.is_zero() for p in restricted):
        raise DegenerateFoliation("the line Z = 0 consists of singular points")
    g = None
    for p in restricted:
        if not p.is_zero():
            up = to_unipoly(p, "X")
            g = up if g is None else poly_gcd(g, up)
    if g.degree() >= 1:
        for x0, Kx, size in _x_classes(g, base, factor_cap):
            found.append(("y", (x0, lift(0, Kx)), Kx, size))
    # the remaining corner (1:0:0)
    corner = {"X": Fraction(1), "Y": Fraction(0), "Z": Fraction(0)}
    if all(not p.evaluate(corner) for p in (A, B, C)):
        found.append(("x", (lift(0, base), lift(0, base)), base, 1))

    points = [_analyze_class(fol, chart, coords, K, size, jet_cap)
              for chart, coords, K, size in found]
    points.sort(key=lambda p: p.sort_key())
    locus = SingularLocus(points, fol.r)
    expected = fol.r * fol.r + fol.r + 1
    if locus.weighted_milnor_sum() != expected:
        raise DegenerateFoliation(
            f"weighted Milnor sum {locus.weighted_milnor_sum()} != {expected}; "
            "the singular locus is not the expected zero-dimensional scheme"
        )
    return locus


def milnor_at(fol, point, jet_cap=DEFAULT_JET_CAP):
    """Milnor number at a singular point: 1 iff the local Jacobian is
    invertible, otherwise the colength of the local pair ideal."""
    af = fol.chart_pair(point.chart)
    vx, vy = af.vars
    a = af.a.to_field(point.field)
    b = af.b.to_field(point.field)
    pt = {vx: point.coords[0], vy: point.coords[1]}
    detj = (a.derivative(vx).evaluate(pt) * b.derivative(vy).evaluate(pt)
            - a.derivative(vy).evaluate(pt) * b.derivative(vx).evaluate(pt))
    if detj:
        return 1
    from .resolution import colength

    ga, gb = fol.local_pair(point)
    return colength([ga, gb], jet_cap)


@dataclass
class ClassifiedLocus:
    locus: SingularLocus
    non_reduced: list
    reduced: list
    irrational: list  # subset of reduced with no rational eigen ratio
    n: int  # geometric count of non-reduced points

    @property
    def obstruction_flag(self):
        """True when some singularity has an irrational eigenvalue ratio,
        which already rules out a rational first integral."""
        return bool(self.irrational)


def classify(fol, locus=None, factor_cap=DEFAULT_FACTOR_CAP,
             jet_cap=DEFAULT_JET_CAP):
    """Split the singular locus into non-reduced and reduced points.

    Requires a non-degenerate foliation (every Milnor number 1); a point
    with an irrational ratio is classified as reduced and recorded in the
    ``irrational`` list, setting the global hard-NO flag.
    """
    if locus is None:
        locus = singular_locus(fol, factor_cap, jet_cap)
    bad = [p for p in locus.points if p.milnor != 1]
    if bad:
        raise DegenerateFoliation(
            f"Milnor number {bad[0].milnor} > 1 at {bad[0].render()}"
        )
    return ClassifiedLocus(
        locus=locus,
        non_reduced=locus.non_reduced(),
        reduced=locus.reduced(),
        irrational=locus.irrational(),
        n=locus.n_non_reduced(),
    )


def cota_test(r, n):
    """Cardinality bound: returns True (pass, inconclusive) iff r+1 <= n.

    A failure is a proof that no rational first integral exists.
    """
    return r + 1 <= n
