"""
Exact linear algebra.

Gaussian elimination over Q(zeta_N) works on CycloNumber entries; rational,
integer and mod-p ranks go through sympy's DomainMatrix. EchelonBasis keeps
an incrementally grown subspace of Q^d in reduced row echelon form.
"""

import logging
from fractions import Fraction

from sympy import GF, Poly, QQ, Symbol, ZZ
from sympy.polys.matrices import DomainMatrix

from .cyclotomic import CycloNumber

logger = logging.getLogger(__name__)

CERTIFICATE_PRIME = 2147483647


def _row_reduce(rows, ncols):
    """Reduced row echelon form; pivots chosen as the first nonzero entry by column order."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = 1 / rows[r][c]
        rows[r] = [v * scale for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _nullspace_from_rref(reduced, pivots, ncols, zero, one):
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [zero] * ncols
        vector[free] = one
        for row, p in zip(reduced, pivots):
            vector[p] = -row[free]
        basis.append(vector)
    return basis


class CycloMatrix:
    """Rectangular grid of CycloNumbers."""

    def __init__(self, rows):
        self.rows = [[CycloNumber.coerce(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(row) != self.ncols for row in self.rows):
            raise ValueError("CycloMatrix rows must have equal length")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __matmul__(self, other):
        cols = list(zip(*other.rows))
        return CycloMatrix([[sum((a * b for a, b in zip(row, col)), CycloNumber.rational(0))
                             for col in cols] for row in self.rows])

    def __sub__(self, other):
        return CycloMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __eq__(self, other):
        return isinstance(other, CycloMatrix) and self.rows == other.rows

    __hash__ = None

    def is_identity(self):
        return self == CycloMatrix.identity(self.nrows)

    def determinant(self):
        """Fraction-free enough for small sizes: elimination with the pivot product."""
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = CycloNumber.rational(1)
        for c in range(n):
            pivot = next((i for i in range(c, n) if rows[i][c]), None)
            if pivot is None:
                return CycloNumber.rational(0)
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                det = -det
            det = det * rows[c][c]
            scale = 1 / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * scale
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def rank_and_nullspace(self):
        return rank_and_nullspace(self.rows)


def rank_and_nullspace(rows):
    """Exact rank and a nullspace basis of a matrix over Q(zeta_N)."""
    rows = [[CycloNumber.coerce(v) for v in row] for row in rows]
    ncols = len(rows[0]) if rows else 0
    reduced, pivots = _row_reduce(rows, ncols)
    null = _nullspace_from_rref(reduced, pivots, ncols, CycloNumber.rational(0), CycloNumber.rational(1))
    return len(pivots), null


def _domain_matrix(rows, domain):
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    if domain == QQ:
        data = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows]
    else:
        data = [[domain(int(v)) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), domain)


def rational_rank(rows):
    """Rank over Q of a matrix with integer or Fraction entries."""
    if not rows or not len(rows[0]):
        return 0
    return _domain_matrix(rows, QQ).rank()


def rational_nullspace(rows):
    if not rows:
        return []
    ncols = len(rows[0])
    reduced, pivots = _row_reduce([[Fraction(v) for v in row] for row in rows], ncols)
    return _nullspace_from_rref(reduced, pivots, ncols, Fraction(0), Fraction(1))


def integer_rank(rows):
    """Rank of an integer matrix (fraction-free elimination inside sympy)."""
    if not rows or not len(rows[0]):
        return 0
    return _domain_matrix(rows, ZZ).convert_to(QQ).rank()


def modular_rank(rows, p=CERTIFICATE_PRIME):
    """Rank mod p. A full modular rank certifies full rational rank of an integer matrix."""
    if not rows or not len(rows[0]):
        return 0
    return _domain_matrix(rows, GF(p)).rank()


def modular_nullspace(rows, p):
    """Nullspace basis mod p as lists of ints in [0, p)."""
    matrix = _domain_matrix(rows, GF(p))
    return [[int(v) % p for v in row] for row in matrix.nullspace().to_list()]


def modular_rref(rows, p):
    matrix, pivots = _domain_matrix(rows, GF(p)).rref()
    reduced = [[int(v) % p for v in row] for row in matrix.to_list()]
    return reduced[:len(pivots)], list(pivots)


def modular_eigenvalues(rows, p):
    """Roots in F_p of the characteristic polynomial."""
    field = GF(p)
    coeffs = [int(c) % p for c in _domain_matrix(rows, field).charpoly()]
    return sorted({int(z) % p for z in Poly(coeffs, Symbol('x'), domain=field).ground_roots()})


class EchelonBasis:
    """
    Subspace of Q^dim grown one vector at a time, kept in reduced row echelon
    form with sparse rows (column -> Fraction) and leading coefficient 1.
    """

    def __init__(self, dim):
        self.dim = dim
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return sorted(self.rows)

    def _sparse(self, vector):
        if isinstance(vector, dict):
            return {c: Fraction(v) for c, v in vector.items() if v}
        return {c: Fraction(int(v)) if not isinstance(v, Fraction) else v
                for c, v in enumerate(vector) if v}

    def _reduce(self, v):
        for p, row in self.rows.items():
            f = v.get(p)
            if f:
                for c, x in row.items():
                    value = v.get(c, 0) - f * x
                    if value:
                        v[c] = value
                    else:
                        v.pop(c, None)
        return v

    def contains(self, vector):
        return not self._reduce(self._sparse(vector))

    def add(self, vector):
        """Add ``vector``; returns True when it enlarged the span."""
        v = self._reduce(self._sparse(vector))
        if not v:
            return False
        pivot = min(v)
        lead = v[pivot]
        v = {c: x / lead for c, x in v.items()}
        for p, row in self.rows.items():
            f = row.get(pivot)
            if f:
                for c, x in v.items():
                    value = row.get(c, 0) - f * x
                    if value:
                        row[c] = value
                    else:
                        row.pop(c, None)
        self.rows[pivot] = v
        return True

    def basis(self):
        """Dense basis rows ordered by pivot."""
        return [[row.get(c, Fraction(0)) for c in range(self.dim)] for _, row in sorted(self.rows.items())]

    def restricted_trace(self, matrix):
        """
        Trace of ``matrix`` (acting on column vectors) restricted to this span,
        assuming the span is invariant: sum_j (matrix r_j)[pivot_j].
        """
        total = Fraction(0)
        for p, row in self.rows.items():
            matrix_row = matrix[p]
            total += sum(int(matrix_row[c]) * x for c, x in row.items())
        return total
