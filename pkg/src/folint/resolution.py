"""Blow-ups, clusters of infinitely near points, and curve-germ invariants.

Local coordinates are always (u, v) and every blow-up is normalized so
that the newest exceptional line is {u = 0}: the first chart keeps
(u, v) -> (u, u*v), the second chart is composed with the swap, giving
(u, v) -> (u*v, u).  Cluster chains over non-reduced singularities are
located by blowing up the actual foliation germ; their multiplicities are
the Euclidean sequence of the eigenvalue pair.

Colengths (Milnor and Tjurina numbers) are computed by truncated-jet
linear algebra with stabilization at two consecutive orders, which is
exact once two successive quotient dimensions agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as int_gcd

from .errors import (AmbiguousChain, NonIsolated, NotCoprime, NotReduced,
                     UnsupportedExtension, ZeroPolynomial)
from .fields import common_field, field_of, lift
from .foliation import eigen_ratio
from .linalg import rank
from .poly import MultiPoly, squarefree_part_2d, to_unipoly
from .unipoly import DEFAULT_FACTOR_CAP, poly_gcd, roots_in_field, \
    squarefree_decomposition

UV = ("u", "v")
DEFAULT_COLENGTH_CAP = 24


@dataclass(frozen=True)
class Germ:
    """A local polynomial f(u, v); note records where it came from."""

    poly: MultiPoly
    note: str = ""

    def __post_init__(self):
        if self.poly.is_zero():
            raise ZeroPolynomial("the zero polynomial is not a germ")


def _poly_of(g):
    return g.poly if isinstance(g, Germ) else g


# -- colength engine ---------------------------------------------------------


def _monomials_below(n):
    return [(i, j) for t in range(n) for i in range(t, -1, -1) for j in (t - i,)]


def colength(gens, jet_cap=DEFAULT_COLENGTH_CAP):
    """dim of k[[u,v]] / (gens) by truncated jets.

    Stops when two consecutive truncation orders give the same quotient
    dimension (then the value is exact); raises NonIsolated at the cap.
    """
    gens = [_poly_of(g) for g in gens]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise NonIsolated("the zero ideal has infinite colength")
    field = None
    for g in gens:
        field = common_field(field, g.field)
    gens = [g.to_field(field) for g in gens]
    if any(g.order() == 0 for g in gens):
        return 0
    prev = None
    for n in range(2, jet_cap + 1):
        monos = _monomials_below(n)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        zero = lift(0, field)
        for g in gens:
            g_ord = g.order()
            for (mi, mj) in monos:
                if mi + mj + g_ord >= n:
                    continue
                row = [zero] * len(monos)
                nonzero = False
                for (ei, ej), c in g.terms.items():
                    ti, tj = ei + mi, ej + mj
                    if ti + tj < n:
                        row[index[(ti, tj)]] = c
                        nonzero = True
                if nonzero:
                    rows.append(row)
        q = len(monos) - (rank(rows) if rows else 0)
        if prev is not None and q == prev:
            return q
        prev = q
    raise NonIsolated(f"colength did not stabilize below jet order {jet_cap}")


def germ_milnor(g, jet_cap=DEFAULT_COLENGTH_CAP):
    """Colength of the partial-derivative ideal (g_u, g_v)."""
    g = _poly_of(g)
    if g.is_zero():
        raise ZeroPolynomial("Milnor number of the zero germ")
    return colength([g.derivative("u"), g.derivative("v")], jet_cap)


def germ_tjurina(g, jet_cap=DEFAULT_COLENGTH_CAP):
    """Colength of (g, g_u, g_v)."""
    g = _poly_of(g)
    if g.is_zero():
        raise ZeroPolynomial("Tjurina number of the zero germ")
    return colength([g, g.derivative("u"), g.derivative("v")], jet_cap)


# -- Euclidean multiplicities --------------------------------------------------


def euclid_multiplicities(rho, delta):
    """Multiplicity sequence of the base-point cluster of (u^rho, v^delta).

    Repeatedly emits the smaller of the pair and subtracts it from the
    larger; for coprime input this ends exactly at (1, 0).
    """
    if rho < 1 or delta < 1:
        raise ValueError("eigenvalue pair must be positive")
    if int_gcd(rho, delta) != 1:
        raise NotCoprime(f"pair ({rho}, {delta}) is not coprime")
    a, b = max(rho, delta), min(rho, delta)
    out = []
    while b > 0:
        out.append(b)
        a, b = max(a - b, b), min(a - b, b)
    assert sum(out) == rho + delta - 1 and sum(m * m for m in out) == rho * delta
    return out


# -- blow-up substitutions ------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One blow-up move: chart '1' lands at direction t0 on {u = 0},
    chart '2' (pre-swapped) lands at the remaining axis direction."""

    chart: str
    t0: object = None


def _uv(field):
    return (MultiPoly.variable(UV, "u", field), MultiPoly.variable(UV, "v", field))


def step_substitute(g, step, power, laurent=False):
    """Apply a blow-up step to a germ and divide by u^power.

    With laurent=True the division may introduce negative exponents
    (virtual transforms); otherwise it must be exact.
    """
    field = common_field(g.field, field_of(step.t0))
    U, V = _uv(field)
    if step.chart == "1":
        t0 = lift(step.t0 if step.t0 is not None else 0, field)
        mapping = {"u": U, "v": U * (V + t0)}
    else:
        mapping = {"u": U * V, "v": U}
    res = g.substitute(mapping, UV, field, laurent=laurent)
    res = res.shift_var("u", -power)
    if not laurent and any(e < 0 for t in res.terms for e in t):
        raise ZeroPolynomial("strict transform division is not exact")
    if not laurent:
        res = MultiPoly(res.vars, res.terms, res.field, laurent=False)
    return res


def strict_transform(g, step):
    return step_substitute(g, step, _poly_of(g).order())


def translate_on_line(g, t0):
    """Recenter at (0, t0) on the exceptional line {u = 0}."""
    field = common_field(g.field, field_of(t0))
    U, V = _uv(field)
    return g.substitute({"u": U, "v": V + lift(t0, field)}, UV, field)


def blowup_pair(a, b):
    """Blow up the 1-form a du + b dv; returns {chart: (a', b')} with the
    common exceptional power divided out and E = {u = 0} in both charts."""
    field = common_field(a.field, b.field)
    U, V = _uv(field)
    sub1 = {"u": U, "v": U * V}
    a_1 = a.substitute(sub1, UV, field)
    b_1 = b.substitute(sub1, UV, field)
    c1a = a_1 + V * b_1
    c1b = U * b_1
    m1 = min(p.min_exponent("u") for p in (c1a, c1b) if not p.is_zero())
    out = {"1": (c1a.shift_var("u", -m1), c1b.shift_var("u", -m1))}
    sub2 = {"u": U * V, "v": U}
    a_2 = a.substitute(sub2, UV, field)
    b_2 = b.substitute(sub2, UV, field)
    c2a = V * a_2 + b_2
    c2b = U * a_2
    m2 = min(p.min_exponent("u") for p in (c2a, c2b) if not p.is_zero())
    out["2"] = (c2a.shift_var("u", -m2), c2b.shift_var("u", -m2))
    return out


def _pair_eigen(a, b):
    """Eigen data of the local vector field (-b, a) at the origin."""
    origin = {"u": lift(0, a.field), "v": lift(0, a.field)}
    au = a.derivative("u").evaluate(origin)
    av = a.derivative("v").evaluate(origin)
    bu = b.derivative("u").evaluate(origin)
    bv = b.derivative("v").evaluate(origin)
    det = au * bv - av * bu
    if not det:
        return None
    return eigen_ratio(((-bu, -bv), (au, av)))


# -- clusters --------------------------------------------------------------------


@dataclass(frozen=True)
class InfinitelyNearPoint:
    level: int
    chart: str | None  # blow-up chart that reached this point (None = origin)
    direction: object  # position on the exceptional line (None for chart 2)
    eigenpair: tuple


@dataclass
class Cluster:
    """Totally ordered chain of infinitely near points over a non-reduced
    singularity, with the Euclidean multiplicities of its eigenvalue pair."""

    origin: object  # SingularPoint
    chain: list
    multiplicities: list
    steps: list  # Step objects; steps[i] moves chain[i] -> chain[i+1]

    def __post_init__(self):
        delta, rho = self.origin.eigen
        assert len(self.chain) == len(self.multiplicities)
        assert sum(self.multiplicities) == rho + delta - 1
        assert sum(m * m for m in self.multiplicities) == rho * delta

    @property
    def field(self):
        return self.origin.field

    def __len__(self):
        return len(self.chain)


def foliation_cluster(fol, point, factor_cap=DEFAULT_FACTOR_CAP):
    """Locate the chain of infinitely near non-reduced points over `point`
    by blowing up the foliation germ and following the unique singularity
    with a positive eigenvalue ratio."""
    if not point.non_reduced or point.eigen is None:
        raise ValueError("clusters are defined over non-reduced singularities")
    delta, rho = point.eigen
    mults = euclid_multiplicities(rho, delta)
    a, b = fol.local_pair(point)
    chain = [InfinitelyNearPoint(0, None, None, (delta, rho))]
    steps = []
    cur = (delta, rho)
    for level in range(1, len(mults)):
        d, r = cur
        expected = (min(d, r - d), max(d, r - d))
        charts = blowup_pair(a, b)
        candidates = []
        a1, b1 = charts["1"]
        ra = to_unipoly(a1.eliminate("u", 0), "v")
        rb = to_unipoly(b1.eliminate("u", 0), "v")
        if ra.is_zero() and rb.is_zero():
            raise AmbiguousChain("the exceptional line consists of singular points")
        g = poly_gcd(ra, rb) if (ra and rb) else (ra if rb.is_zero() else rb).monic()
        if g.degree() > 0:
            roots, nonlinear = roots_in_field(g, factor_cap)
            if nonlinear:
                raise UnsupportedExtension(
                    "a blown-up singularity needs a further field extension"
                )
            for t0 in roots:
                at = translate_on_line(a1, t0)
                bt = translate_on_line(b1, t0)
                ratio = _pair_eigen(at, bt)
                if isinstance(ratio, tuple) and ratio[0] > 0 and ratio[1] > 0:
                    candidates.append(("1", t0, ratio, at, bt))
        a2, b2 = charts["2"]
        origin = {"u": lift(0, a2.field), "v": lift(0, a2.field)}
        if not a2.evaluate(origin) and not b2.evaluate(origin):
            ratio = _pair_eigen(a2, b2)
            if isinstance(ratio, tuple) and ratio[0] > 0 and ratio[1] > 0:
                candidates.append(("2", None, ratio, a2, b2))
        if len(candidates) != 1:
            raise AmbiguousChain(
                f"expected one non-reduced point on the exceptional line, "
                f"found {len(candidates)}"
            )
        chart, t0, ratio, a, b = candidates[0]
        if tuple(ratio) != expected:
            raise AmbiguousChain(
                f"eigenvalue pair {ratio} at level {level}, expected {expected}"
            )
        chain.append(InfinitelyNearPoint(level, chart, t0, tuple(ratio)))
        steps.append(Step(chart, t0))
        cur = tuple(ratio)
    return Cluster(point, chain, mults, steps)


# -- multiplicity sequences along a cluster ----------------------------------------


def germ_transforms(g, cluster):
    """Multiplicity sequence and the successive strict transforms of g at
    the cluster's chain points."""
    g = _poly_of(g)
    if g.is_zero():
        raise ZeroPolynomial("transforms of the zero germ")
    field = common_field(g.field, cluster.field)
    cur = g.to_field(field)
    seq = []
    transforms = [cur]
    for i in range(len(cluster.chain)):
        m = cur.order()
        seq.append(m)
        if i < len(cluster.steps):
            cur = step_substitute(cur, cluster.steps[i], m)
            transforms.append(cur)
    return seq, transforms


def germ_mult_sequence(g, cluster):
    """Multiplicities of the strict transforms of g at the chain points."""
    return germ_transforms(g, cluster)[0]


def _restriction(w):
    """Restriction of a germ to the exceptional line {u = 0}, in v."""
    return to_unipoly(w.eliminate("u", 0).rename(("v",)), "v")


def _end_record(cur, with_corner_check=()):
    """Summary of how the final strict transform meets the last
    exceptional line: (chart-1 restriction squarefree, its degree,
    crossing order at the chart-2 direction point)."""
    m = cur.order()
    w1 = step_substitute(cur, Step("1", None), m)
    w2 = step_substitute(cur, Step("2"), m)
    r1 = _restriction(w1)
    if r1.is_zero():
        return ("component_on_E",)
    sf = poly_gcd(r1, r1.derivative()).degree() == 0
    s2 = _restriction(w2)
    chart2_order = 0
    if not s2.is_zero():
        for i, c in enumerate(s2.coeffs):
            if c:
                chart2_order = i
                break
    else:
        return ("component_on_E",)
    return (sf, r1.degree(), chart2_order)


def equisingular(g1, g2, cluster):
    """Equal multiplicity sequences along the shared cluster and the same
    reduced intersection behaviour with the last exceptional line."""
    s1, t1 = germ_transforms(g1, cluster)
    s2, t2 = germ_transforms(g2, cluster)
    if s1 != s2:
        return False, f"multiplicity sequences differ: {s1} vs {s2}"
    e1 = _end_record(t1[-1])
    e2 = _end_record(t2[-1])
    if e1 != e2:
        return False, f"end behaviour differs: {e1} vs {e2}"
    if e1[0] == "component_on_E" or not e1[0] or e1[2] > 1:
        return False, f"strict transforms are not reduced/transverse at the end: {e1}"
    return True, None


# -- nodal and quasi-homogeneous type tests -------------------------------------------


def _binary_form_exponents(form, factor_cap):
    """Exponent multiset of the distinct projective roots of a binary form
    in (u, v): [(multiplicity, number_of_roots)] without computing roots."""
    du = form.min_exponent("u")
    if du:
        form = form.shift_var("u", -du)
    f = to_unipoly(form.eliminate("u", 1).rename(("v",)), "v")
    out = []
    if du:
        out.append((du, 1))
    if f.degree() > 0:
        for part, mult in squarefree_decomposition(f):
            out.append((mult, part.degree()))
    return out


def is_nodal(g):
    """Local equation of the shape g1^n g2^m with smooth transversal
    branches; returns (True, (n, m)) or (False, reason)."""
    g = _poly_of(g)
    if g.is_zero():
        raise ZeroPolynomial("nodal test on the zero germ")
    if g.order() == 0:
        return False, "the germ does not vanish at the origin"
    gred, _ = squarefree_part_2d(g)
    if gred.order() != 2:
        return False, f"reduced germ has multiplicity {gred.order()}, not 2"
    jet = _lowest_form(gred)
    u2 = jet.coeff((2, 0))
    uv = jet.coeff((1, 1))
    v2 = jet.coeff((0, 2))
    disc = uv * uv - 4 * u2 * v2
    if not disc:
        return False, "the two branches share a tangent line"
    exps = _binary_form_exponents(_lowest_form(g), DEFAULT_FACTOR_CAP)
    mults = []
    for mult, count in exps:
        mults.extend([mult] * count)
    assert len(mults) == 2
    return True, (min(mults), max(mults))


def _lowest_form(g):
    o = g.order()
    terms = {e: c for e, c in g.terms.items() if sum(e) == o}
    return MultiPoly(g.vars, terms, g.field)


def _infield_roots_of_multiple_part(r, factor_cap):
    """In-field positions where a restriction has a multiple root."""
    m = poly_gcd(r, r.derivative())
    if m.degree() == 0:
        return []
    roots, _ = roots_in_field(m, factor_cap)
    return roots


def type_check_S(g, a, b, k, along=None, jet_cap=DEFAULT_COLENGTH_CAP,
                 factor_cap=DEFAULT_FACTOR_CAP):
    """Test for the topological type of x^(k*a) + y^(k*b) = 0.

    Checks, in order: the germ is reduced; its Milnor number equals
    (ka-1)(kb-1); its multiplicity sequence equals k times the Euclidean
    sequence of (a, b) -- along the supplied cluster when given, else
    along the germ's own infinitely near points -- and after the chain
    the transform splits into k smooth branches meeting the exceptional
    line transversally at distinct non-corner points.

    Returns (True, detail) or (False, reason).
    """
    g = _poly_of(g)
    if int_gcd(a, b) != 1:
        raise NotCoprime(f"type parameters ({a}, {b}) must be coprime")
    _, radical = squarefree_part_2d(g)
    if not radical.is_constant():
        raise NotReduced("the germ is not reduced")
    mu = germ_milnor(g, jet_cap)
    expected_mu = (k * a - 1) * (k * b - 1)
    if mu != expected_mu:
        return False, f"Milnor number {mu} != {expected_mu}"
    expected = [k * m for m in euclid_multiplicities(a, b)]
    if along is not None:
        seq, transforms = germ_transforms(g, along)
        if seq != expected:
            return False, f"multiplicity sequence {seq} != {expected}"
        end = _end_record(transforms[-1])
        if end[0] == "component_on_E" or not end[0]:
            return False, f"final transform not reduced on E: {end}"
        if end[1] + (1 if end[2] == 1 else 0) != k or end[2] > 1:
            return False, f"final transform does not split into {k} branches: {end}"
        return True, {"milnor": mu, "sequence": seq}
    ok, reason, seq = _walk_own_cluster(g, expected, k, factor_cap)
    if not ok:
        return False, reason
    return True, {"milnor": mu, "sequence": seq}


def _walk_own_cluster(g, expected, k, factor_cap):
    """Follow the germ's own cluster (free and satellite points), checking
    the expected multiplicities; used when no foliation cluster is given."""
    cur = g
    boundary = []  # germs of exceptional components through the current point
    seq = []
    for i, em in enumerate(expected):
        m = cur.order()
        seq.append(m)
        if m != em:
            return False, f"multiplicity {m} != {em} at chain point {i}", seq
        last = i == len(expected) - 1
        w1 = step_substitute(cur, Step("1", None), m)
        w2 = step_substitute(cur, Step("2"), m)
        r1 = _restriction(w1)
        if r1.is_zero():
            return False, "a component lies on the exceptional line", seq
        # boundary strict transforms and their corner positions on E
        b1 = [strict_transform(bg, Step("1", None)) for bg in boundary]
        corners = []
        for bt in b1:
            rb = _restriction(bt)
            if rb.degree() >= 1:
                roots, _ = roots_in_field(rb, factor_cap)
                corners.extend(roots)
        chart2_corner = False
        for bg in boundary:
            bt = strict_transform(bg, Step("2"))
            if not bt.evaluate({"u": lift(0, bt.field), "v": lift(0, bt.field)}):
                chart2_corner = True
        s2 = _restriction(w2)
        w2_order = None
        if not s2.is_zero():
            w2_order = next((i2 for i2, c in enumerate(s2.coeffs) if c), None)
        passes2 = w2_order is not None and w2_order >= 1
        if last:
            if poly_gcd(r1, r1.derivative()).degree() != 0:
                return False, "final transform is tangent or singular on E", seq
            if any(r1.eval(v0) == 0 for v0 in corners):
                return False, "a branch ends at a corner of the boundary", seq
            if passes2 and (w2_order > 1 or chart2_corner):
                return False, "a branch ends badly at the second chart point", seq
            count = r1.degree() + (1 if passes2 else 0)
            if count != k:
                return False, f"{count} end branches, expected {k}", seq
            return True, None, seq
        cands = []
        for v0 in _infield_roots_of_multiple_part(r1, factor_cap):
            cands.append(("1", v0))
        for v0 in corners:
            if r1.eval(v0) == 0 and ("1", v0) not in cands:
                cands.append(("1", v0))
        if passes2 and (w2_order >= 2 or chart2_corner):
            cands.append(("2", None))
        if len(cands) != 1:
            return False, f"{len(cands)} continuation points, expected 1", seq
        chart, v0 = cands[0]
        field = w1.field
        new_boundary = [MultiPoly.variable(UV, "u", field)]
        if chart == "1":
            cur = translate_on_line(w1, v0)
            for bt in b1:
                moved = translate_on_line(bt, v0)
                if not moved.evaluate({"u": lift(0, moved.field),
                                       "v": lift(0, moved.field)}):
                    new_boundary.append(moved)
        else:
            cur = w2
            for bg in boundary:
                bt = strict_transform(bg, Step("2"))
                if not bt.evaluate({"u": lift(0, bt.field), "v": lift(0, bt.field)}):
                    new_boundary.append(bt)
        boundary = new_boundary
    return True, None, seq
