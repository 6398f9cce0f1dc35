"""Exact dense linear algebra: fraction-free elimination over Q, generic
Gaussian rank over any of our scalar fields, and a Bareiss determinant
that also works with polynomial entries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of Fractions

    @classmethod
    def from_rows(cls, rows):
        rows = [list(map(Fraction, r)) for r in rows]
        n = len(rows[0]) if rows else 0
        assert all(len(r) == n for r in rows)
        return cls(len(rows), n, tuple(x for r in rows for x in r))

    def row(self, i):
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def mul_vector(self, v):
        return [
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols)),
                Fraction(0))
            for i in range(self.rows)
        ]


def _integer_rows(rows):
    """Scale each row by the lcm of denominators; returns int rows."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def _bareiss_echelon(m):
    """In-place fraction-free forward elimination on integer rows.

    Returns the list of (pivot_row, pivot_col) in order.
    """
    if not m:
        return []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    prev = 1
    pr = 0
    for pc in range(n_cols):
        pivot_row = None
        for i in range(pr, n_rows):
            if m[i][pc]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != pr:
            m[pr], m[pivot_row] = m[pivot_row], m[pr]
        piv = m[pr][pc]
        for i in range(pr + 1, n_rows):
            fi = m[i][pc]
            for j in range(n_cols):
                m[i][j] = (m[i][j] * piv - m[pr][j] * fi) // prev
        prev = piv
        pivots.append((pr, pc))
        pr += 1
        if pr == n_rows:
            break
    return pivots


def rank(rows):
    """Exact rank; entries may be Fractions or FieldElements (any field)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_cols = len(m[0])
    rk = 0
    for pc in range(n_cols):
        pivot_row = None
        for i in range(rk, len(m)):
            if m[i][pc]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[rk], m[pivot_row] = m[pivot_row], m[rk]
        inv_entries = m[rk]
        piv = inv_entries[pc]
        for i in range(rk + 1, len(m)):
            f = m[i][pc]
            if f:
                f = f / piv
                for j in range(pc, n_cols):
                    m[i][j] = m[i][j] - f * inv_entries[j]
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(matrix):
    """Exact kernel basis of an ExactMatrix (or row list) over Q.

    Forward elimination is fraction-free (Bareiss on integer-scaled rows);
    each basis vector has its first nonzero entry scaled to 1 and the
    basis is sorted lexicographically, so output is deterministic.
    """
    if isinstance(matrix, ExactMatrix):
        rows = matrix.to_rows()
        n_cols = matrix.cols
    else:
        rows = [list(map(Fraction, r)) for r in matrix]
        n_cols = len(rows[0]) if rows else 0
    if n_cols == 0:
        return []
    m = _integer_rows(rows)
    pivots = _bareiss_echelon(m)
    piv_cols = [pc for _, pc in pivots]
    free_cols = [c for c in range(n_cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for pr, pc in reversed(pivots):
            s = sum((Fraction(m[pr][c]) * v[c] for c in range(pc + 1, n_cols)),
                    Fraction(0))
            v[pc] = -s / m[pr][pc]
        basis.append(v)
    normalized = []
    for v in basis:
        lead = next(x for x in v if x)
        normalized.append(tuple(x / lead for x in v))
    normalized.sort()
    return [list(v) for v in normalized]


def nullspace_generic(rows, n_cols):
    """Kernel basis by Gaussian elimination over any exact field.

    Entries may be Fractions or FieldElements.  Basis vectors have their
    first nonzero entry scaled to 1 and are sorted deterministically.
    """
    m = [list(r) for r in rows]
    pivots = []
    rk = 0
    for pc in range(n_cols):
        pr = None
        for i in range(rk, len(m)):
            if m[i][pc]:
                pr = i
                break
        if pr is None:
            continue
        m[rk], m[pr] = m[pr], m[rk]
        piv = m[rk][pc]
        m[rk] = [x / piv for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][pc]:
                f = m[i][pc]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        pivots.append(pc)
        rk += 1
    piv_set = set(pivots)
    free_cols = [c for c in range(n_cols) if c not in piv_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        lead = next(x for x in v if x)
        v = [x / lead for x in v]
        basis.append(v)

    def vkey(v):
        out = []
        for x in v:
            if hasattr(x, "coords"):
                out.append((1,) + tuple(x.coords))
            else:
                out.append((0, Fraction(x)))
        return tuple(out)

    basis.sort(key=vkey)
    return basis


def det_bareiss(grid, exact_div=None):
    """Determinant by fraction-free Bareiss elimination.

    Works over any integral domain when ``exact_div`` performs exact
    division (defaults to true division, correct for Fractions and field
    elements).  Used with polynomial entries for resultants.
    """
    n = len(grid)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in grid]
    if exact_div is None:
        exact_div = lambda a, b: a / b
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                zero = m[k][k]
                return zero  # a zero of the right type
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else exact_div(num, prev)
            m[i][k] = m[i][k] - m[i][k]  # zero of the right type
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d
