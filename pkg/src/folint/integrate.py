"""The decision pipeline: does a non-degenerate plane foliation admit a
rational first integral of degree below a bound?

The search enumerates the two Diophantine conditions on the eigenvalue
data of the non-reduced singularities, computes for each solution the
linear system of degree-d forms through the weighted clusters, and
certifies any 2-dimensional system by the exact wedge identity
(G dF - F dG) ^ Omega = 0, which alone gates a YES verdict.  Failures of
the cardinality bound or an irrational eigenvalue ratio are proofs of NO.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction as Rat

from .errors import (AmbiguousChain, BasePointCollision, DegenerateFoliation,
                     FactorDegreeCap, FolintError, NonIsolated, NotCoprime,
                     NotReduced, UnsupportedExtension)
from .fields import FieldElement, lift
from .foliation import (DEFAULT_JET_CAP, ClassifiedLocus, Foliation, classify,
                        cota_test)
from .forms import PROJ_VARS, ProjOneForm, chart_restrict, pencil_differential, \
    translate_to_origin, wedge
from .linalg import nullspace, nullspace_generic, rank
from .poly import MultiPoly
from .resolution import (DEFAULT_COLENGTH_CAP, equisingular, foliation_cluster,
                         germ_milnor, germ_tjurina, step_substitute, type_check_S)
from .unipoly import DEFAULT_FACTOR_CAP


@dataclass(frozen=True)
class DegreeBound:
    """Exclusive upper bound on the degree of the sought pencil."""

    t: int

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("the degree bound must be at least 2")


@dataclass(frozen=True)
class DiophantineSolution:
    d: int
    k: tuple  # one positive integer per non-reduced class, canonical order


@dataclass
class PencilCandidate:
    solution: DiophantineSolution
    dimension: int
    basis: list  # degree-d MultiPolys over the base field
    rows: int
    matrix_rank: int

    @property
    def accepted(self):
        return self.dimension == 2


@dataclass(frozen=True)
class WedgeCertificate:
    zero: bool
    component: str | None = None
    witness: str | None = None


@dataclass
class IntegrabilityReport:
    verdict: str  # first_integral | proven_no | no_below_bound | unsupported
    numerator: object = None
    denominator: object = None
    solution: DiophantineSolution | None = None
    obstruction: dict | None = None
    bound: int | None = None
    reason: str | None = None
    diagnostics: dict = dc_field(default_factory=dict)
    classified: ClassifiedLocus | None = None
    candidates_tried: int = 0


def solve_diophantine(eigendata, r, t):
    """All (d, k) with d below the bound satisfying
    d^2 = sum e_c k_c^2 rho_c delta_c  and  d(r+2) = sum e_c k_c (rho_c + delta_c).

    eigendata lists (delta, rho, class_size) per non-reduced class; k is
    constant on a class and conjugate points count individually.  Output
    is sorted by (d, lexicographic k); assigning one multiset to distinct
    classes yields distinct solutions.
    """
    bound = t.t if isinstance(t, DegreeBound) else int(t)
    ncls = len(eigendata)
    if ncls == 0:
        return []
    qunit = [e * delta * rho for delta, rho, e in eigendata]
    lunit = [e * (delta + rho) for delta, rho, e in eigendata]
    # minimal remaining contribution (k = 1 on every later class)
    qmin = [0] * (ncls + 1)
    lmin = [0] * (ncls + 1)
    for i in range(ncls - 1, -1, -1):
        qmin[i] = qmin[i + 1] + qunit[i]
        lmin[i] = lmin[i + 1] + lunit[i]
    out = []
    for d in range(1, bound):
        acc = [0] * ncls

        def rec(i, qrem, lrem):
            if i == ncls:
                if qrem == 0 and lrem == 0:
                    out.append(DiophantineSolution(d, tuple(acc)))
                return
            k = 1
            while (k * k * qunit[i] + qmin[i + 1] <= qrem
                   and k * lunit[i] + lmin[i + 1] <= lrem):
                acc[i] = k
                rec(i + 1, qrem - k * k * qunit[i], lrem - k * lunit[i])
                k += 1
            acc[i] = 0

        rec(0, d * d, d * (r + 2))
    return out


def monomial_basis(d):
    """Exponent tuples of the degree-d monomials in X, Y, Z, graded-lex
    descending (X^d first, Z^d last)."""
    return sorted(
        ((i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)),
        reverse=True,
    )


class _GermCache:
    """Translated germs of the degree-d monomial basis at cluster origins."""

    def __init__(self):
        self._store = {}

    def get(self, cluster, d):
        key = (id(cluster), d)
        if key not in self._store:
            origin = cluster.origin
            germs = []
            for exps in monomial_basis(d):
                mono = MultiPoly.monomial(PROJ_VARS, exps, 1)
                affine = chart_restrict(mono, origin.chart).to_field(origin.field)
                germs.append(translate_to_origin(affine, origin.coords))
            self._store[key] = germs
        return self._store[key]


def _expand_condition(coeffs, K, base):
    """One linear condition over K as rows over the base field."""
    if K == base:
        if base is None:
            return [[Rat(c) if not isinstance(c, FieldElement) else c.rational_value()
                     for c in coeffs]]
        return [list(coeffs)]
    rows = []
    for r in range(K.degree):
        row = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                row.append(c.coords[r])
            else:
                row.append(Rat(c) if r == 0 else Rat(0))
        rows.append(row)
    return rows


def cluster_conditions(solution, clusters, d, base=None, cache=None):
    """Linear conditions on the coefficients of a degree-d form imposing
    virtual multiplicity k(p) * m_q at every cluster point q.

    Conditions at a class representative over an extension of degree e
    expand into e rows over the base field; conjugate conditions are then
    automatic for base-rational coefficient vectors.
    """
    cache = cache or _GermCache()
    rows = []
    for cluster, k in zip(clusters, solution.k):
        K = cluster.origin.field
        cur = list(cache.get(cluster, d))
        for i, m in enumerate(cluster.multiplicities):
            M = k * m
            seen = set()
            for gp in cur:
                for e in gp.terms:
                    if sum(e) < M:
                        seen.add(e)
            for e in sorted(seen):
                coeffs = [gp.terms.get(e, lift(0, K)) for gp in cur]
                rows.extend(_expand_condition(coeffs, K, base))
            if i < len(cluster.steps):
                cur = [step_substitute(gp, cluster.steps[i], M, laurent=True)
                       for gp in cur]
    return rows


def linear_system(solution, clusters, d=None, base=None, cache=None):
    """Kernel of the condition matrix, rendered as degree-d forms.

    The candidate is accepted exactly when the kernel dimension is 2.
    """
    d = solution.d if d is None else d
    monos = monomial_basis(d)
    n = len(monos)
    rows = cluster_conditions(solution, clusters, d, base, cache)
    if not rows:
        vecs = [[Rat(1 if i == j else 0) for j in range(n)] for i in range(n)]
        mrank = 0
    elif base is None:
        vecs = nullspace(rows)
        mrank = rank(rows)
    else:
        vecs = nullspace_generic(rows, n)
        mrank = rank(rows)
    basis = []
    for v in vecs:
        terms = {monos[j]: v[j] for j in range(n) if v[j]}
        basis.append(MultiPoly(PROJ_VARS, terms, base))
    return PencilCandidate(solution, len(vecs), basis, len(rows), mrank)


def certify_wedge(F, G, omega):
    """Exact check of the identity (G dF - F dG) ^ Omega = 0."""
    form = omega.form if isinstance(omega, Foliation) else omega
    eta = pencil_differential(F, G)
    w = wedge(eta, form)
    if w.is_zero():
        return WedgeCertificate(True)
    component, witness = w.witness()
    return WedgeCertificate(False, component, witness)


def _germ_at(H, point):
    affine = chart_restrict(H, point.chart).to_field(point.field)
    return translate_to_origin(affine, point.coords)


def verify_condition_d(candidate, clusters, jet_cap=DEFAULT_COLENGTH_CAP,
                       factor_cap=DEFAULT_FACTOR_CAP):
    """Per-class diagnostics on the accepted basis {H1, H2}: germs are
    equisingular, the product germ is reduced with equal Milnor and
    Tjurina numbers, and it has the expected quasi-homogeneous type."""
    H1, H2 = candidate.basis
    results = []
    for cluster, k in zip(clusters, candidate.solution.k):
        p = cluster.origin
        delta, rho = p.eigen
        g1 = _germ_at(H1, p)
        g2 = _germ_at(H2, p)
        entry = {"point": p.render(), "k": k, "eigen": (delta, rho)}
        eq, eq_reason = equisingular(g1, g2, cluster)
        entry["equisingular"] = eq
        if eq_reason:
            entry["equisingular_detail"] = eq_reason
        product = g1 * g2
        try:
            mu = germ_milnor(product, jet_cap)
            tau = germ_tjurina(product, jet_cap)
            entry["milnor"] = mu
            entry["tjurina"] = tau
            entry["milnor_equals_tjurina"] = mu == tau
        except (NonIsolated, FolintError) as exc:
            entry["milnor_equals_tjurina"] = False
            entry["detail"] = str(exc)
        try:
            ok, detail = type_check_S(product, rho, delta, 2 * k, along=cluster,
                                      jet_cap=jet_cap, factor_cap=factor_cap)
            entry["s_type"] = ok
            entry["s_type_detail"] = detail if ok else detail
        except NotReduced as exc:
            entry["s_type"] = False
            entry["s_type_detail"] = str(exc)
        entry["ok"] = bool(entry.get("equisingular"))
        entry["ok"] = (entry["ok"] and entry.get("milnor_equals_tjurina", False)
                       and entry.get("s_type", False))
        results.append(entry)
    return results


def verify_condition_e(candidate, reduced_points):
    """Each reduced singularity must be a singular point of the unique
    pencil member through it (vanishing projective gradient)."""
    H1, H2 = candidate.basis
    results = []
    for p in reduced_points:
        px, py, pz = p.proj
        point = {"X": px, "Y": py, "Z": pz}
        h1 = H1.to_field(p.field).evaluate(point)
        h2 = H2.to_field(p.field).evaluate(point)
        if not h1 and not h2:
            raise BasePointCollision(
                f"reduced point {p.render()} lies on every pencil member"
            )
        member = H1.to_field(p.field) * h2 - H2.to_field(p.field) * h1
        grads = [member.derivative(v).evaluate(point) for v in PROJ_VARS]
        ok = all(not gval for gval in grads)
        results.append({"point": p.render(), "singular_on_member": ok})
    return results


def _degree_one_bypass(fol, report):
    """Non-degenerate degree-1 foliations in the normal form
    a YZ dX + b XZ dY - (a+b) XY dZ are integrable with X^a Y^b / Z^(a+b);
    anything else of degree 1 is out of scope."""
    A, B, C = fol.form.components()

    def single_coeff(p, exps):
        if set(p.terms) != {exps}:
            return None
        c = p.terms[exps]
        if isinstance(c, FieldElement):
            if not c.is_rational():
                return None
            c = c.rational_value()
        return Rat(c)

    a = single_coeff(A, (0, 1, 1))
    b = single_coeff(B, (1, 0, 1))
    c = single_coeff(C, (1, 1, 0))
    if a is not None and b is not None and a < 0 and b < 0:
        a, b, c = -a, -b, -c  # the overall scale is only defined up to sign
    if a is None or b is None or c is None or a <= 0 or b <= 0 or a + b != -c:
        report.verdict = "unsupported"
        report.reason = ("degree-one foliation not in the normal form "
                         "a*Y*Z dX + b*X*Z dY - (a+b)*X*Y dZ; "
                         "normal-form detection is not implemented")
        return report
    den = a.denominator * b.denominator
    ai, bi = int(a * den), int(b * den)
    from math import gcd as int_gcd

    g = int_gcd(ai, bi)
    ai, bi = ai // g, bi // g
    F = MultiPoly.monomial(PROJ_VARS, (ai, bi, 0), 1)
    G = MultiPoly.monomial(PROJ_VARS, (0, 0, ai + bi), 1)
    cert = certify_wedge(F, G, fol.form)
    assert cert.zero
    report.verdict = "first_integral"
    report.numerator = F
    report.denominator = G
    report.diagnostics["wedge_certificate"] = "zero"
    report.diagnostics["note"] = "degree-one closed form X^a Y^b / Z^(a+b)"
    return report


def find_first_integral(fol, t, parallel=1, factor_cap=DEFAULT_FACTOR_CAP,
                        jet_cap=DEFAULT_JET_CAP,
                        colength_cap=DEFAULT_COLENGTH_CAP):
    """Full decision pipeline below the degree bound t.

    Order: classify the singular locus; hard NO by the cardinality bound,
    then by an irrational eigenvalue ratio; clusters; Diophantine
    enumeration; per solution the linear system and, on dimension 2, the
    wedge certificate.  The first certified candidate wins; diagnostics
    for the characterization conditions (d) and (e) are attached but never
    gate the verdict.
    """
    if not isinstance(t, DegreeBound):
        t = DegreeBound(int(t))
    report = IntegrabilityReport(verdict="no_below_bound", bound=t.t)
    try:
        cls = classify(fol, factor_cap=factor_cap, jet_cap=jet_cap)
    except (DegenerateFoliation, UnsupportedExtension, FactorDegreeCap,
            NonIsolated, AmbiguousChain) as exc:
        report.verdict = "unsupported"
        report.reason = f"{type(exc).__name__}: {exc}"
        return report
    report.classified = cls
    if fol.r == 1:
        return _degree_one_bypass(fol, report)
    if not cota_test(fol.r, cls.n):
        report.verdict = "proven_no"
        report.obstruction = {"type": "cardinality", "r": fol.r, "n": cls.n}
        if cls.obstruction_flag:
            report.diagnostics["irrational_ratio_points"] = [
                p.render() for p in cls.irrational
            ]
        return report
    if cls.obstruction_flag:
        p = cls.irrational[0]
        report.verdict = "proven_no"
        report.obstruction = {
            "type": "irrational_ratio",
            "point": p.render(),
            "trace_sq_over_det": p.eigen_s,
        }
        return report
    try:
        clusters = [foliation_cluster(fol, p, factor_cap)
                    for p in cls.non_reduced]
    except (UnsupportedExtension, FactorDegreeCap, AmbiguousChain) as exc:
        report.verdict = "unsupported"
        report.reason = f"{type(exc).__name__}: {exc}"
        return report
    eigendata = [(p.eigen[0], p.eigen[1], p.size) for p in cls.non_reduced]
    solutions = solve_diophantine(eigendata, fol.r, t)
    report.diagnostics["diophantine_solutions"] = len(solutions)
    if not solutions:
        return report
    cache = _GermCache()
    base = fol.field

    def evaluate(sol):
        cand = linear_system(sol, clusters, sol.d, base, cache)
        if not cand.accepted:
            return cand, None
        F, G = cand.basis
        try:
            cert = certify_wedge(F, G, fol.form)
        except NotCoprime:
            return cand, WedgeCertificate(False, None, "basis not coprime")
        return cand, cert

    found = None
    if parallel and parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(evaluate, solutions))
        for i, (cand, cert) in enumerate(results):
            report.candidates_tried = i + 1
            if cert is not None and cert.zero:
                found = cand
                break
    else:
        for i, sol in enumerate(solutions):
            cand, cert = evaluate(sol)
            report.candidates_tried = i + 1
            if cert is not None and cert.zero:
                found = cand
                break
    if found is None:
        return report
    F, G = found.basis
    report.verdict = "first_integral"
    report.numerator = F
    report.denominator = G
    report.solution = found.solution
    report.diagnostics["wedge_certificate"] = "zero"
    report.diagnostics["kernel_dimension"] = found.dimension
    report.diagnostics["independent_conditions"] = found.matrix_rank
    try:
        report.diagnostics["condition_d"] = verify_condition_d(
            found, clusters, colength_cap, factor_cap)
    except FolintError as exc:
        report.diagnostics["condition_d"] = f"failed: {exc}"
    try:
        report.diagnostics["condition_e"] = verify_condition_e(
            found, cls.reduced)
    except (BasePointCollision, FolintError) as exc:
        report.diagnostics["condition_e"] = f"failed: {exc}"
    report.diagnostics["caveat"] = (
        "pencil searched with coefficients in the base field only"
    )
    return report
