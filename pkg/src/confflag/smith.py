"""Smith normal form of graded square matrices over Q[u].

A matrix is graded when every nonzero entry ``(i, j)`` is a monomial
``c * u**e`` with ``e = (col_degrees[j] - row_degrees[i]) / unit``.  Such a
matrix is ``diag(u**-a) C diag(u**b)`` for a constant ``C``, so the Smith form
comes from constant Gaussian elimination on ``C`` provided pivots are taken in
order of increasing implied exponent.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeMismatch, SingularMatrix, SizeMismatch
from .matrix import PolyMatrix, det_rational
from .poly import RatPoly


@dataclass(frozen=True)
class SmithForm:
    """Result of :func:`graded_smith_form`; ``U @ M @ V == diagonal_matrix``."""

    exponents: tuple
    units: tuple
    U: PolyMatrix
    V: PolyMatrix
    generator_degrees: tuple
    unit: int

    @property
    def invariant_factors(self):
        """Monic invariant factors ``u**e`` in divisibility order."""
        return tuple(RatPoly.monomial(1, e) for e in self.exponents)

    @property
    def diagonal(self):
        return tuple(RatPoly.monomial(c, e) for c, e in zip(self.units, self.exponents))

    def diagonal_matrix(self):
        n = len(self.exponents)
        d = self.diagonal
        return PolyMatrix([[d[i] if i == j else RatPoly.zero() for j in range(n)]
                           for i in range(n)])

    def reconstructs(self, M):
        """Exact certificate check ``U M V == D``."""
        return (self.U @ M @ self.V) == self.diagonal_matrix()

    def cokernel_series(self):
        """Graded dimensions of the cokernel as coefficients of a polynomial in t."""
        out = {}
        for e, d in zip(self.exponents, self.generator_degrees):
            for k in range(e):
                deg = d + self.unit * k
                out[deg] = out.get(deg, 0) + 1
        if not out:
            return []
        top = max(out)
        return [out.get(k, 0) for k in range(top + 1)]


def graded_smith_form(M, col_degrees, row_degrees, unit=4):
    """Graded Smith form of a square matrix over Q[u] with degree metadata.

    ``unit`` is the degree carried by ``u``.  Raises :class:`DegreeMismatch`
    when an entry is not the monomial its position implies and
    :class:`SingularMatrix` when ``det M = 0``.
    """
    n = M.rows
    if not M.is_square():
        raise SizeMismatch("graded Smith form needs a square matrix")
    if len(col_degrees) != n or len(row_degrees) != n:
        raise SizeMismatch("degree metadata does not match the matrix size")
    a = [Fraction(r, unit) for r in row_degrees]
    b = [Fraction(c, unit) for c in col_degrees]
    C = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = M[i, j]
            if not e:
                continue
            want = b[j] - a[i]
            if want.denominator != 1 or want < 0 or not e.is_monomial() or e.degree != want:
                raise DegreeMismatch(
                    f"entry ({i}, {j}) = {e} is not homogeneous of implied degree {want}")
            C[i][j] = e.lc
    if det_rational(C) == 0:
        raise SingularMatrix("graded Smith form of a singular matrix")

    Uc = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    Vc = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows_left, cols_left = set(range(n)), set(range(n))
    pivots = []
    while rows_left:
        best = None
        for i in rows_left:
            Ci = C[i]
            for j in cols_left:
                if Ci[j]:
                    key = (b[j] - a[i], i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            raise SingularMatrix("graded Smith form lost rank during elimination")
        _, pi, pj = best
        piv = C[pi][pj]
        for i in rows_left:
            if i == pi or not C[i][pj]:
                continue
            f = C[i][pj] / piv
            Ci, Cp = C[i], C[pi]
            for j in range(n):
                if Cp[j]:
                    Ci[j] -= f * Cp[j]
            Ui, Up = Uc[i], Uc[pi]
            for j in range(n):
                if Up[j]:
                    Ui[j] -= f * Up[j]
        for j in cols_left:
            if j == pj or not C[pi][j]:
                continue
            f = C[pi][j] / piv
            for row in C:
                if row[pj]:
                    row[j] -= f * row[pj]
            for row in Vc:
                if row[pj]:
                    row[j] -= f * row[pj]
        rows_left.discard(pi)
        cols_left.discard(pj)
        pivots.append((pi, pj, piv))

    U_rows, V_cols, exps, units, gens = [], [], [], [], []
    for pi, pj, piv in pivots:
        row = []
        for q in range(n):
            c = Uc[pi][q]
            row.append(_graded_entry(c, a[q] - a[pi], "U"))
        U_rows.append(row)
        col = []
        for p in range(n):
            c = Vc[p][pj]
            col.append(_graded_entry(c, b[pj] - b[p], "V"))
        V_cols.append(col)
        exps.append(int(b[pj] - a[pi]))
        units.append(piv)
        gens.append(row_degrees[pi])
    V = PolyMatrix(list(zip(*V_cols)))
    return SmithForm(tuple(exps), tuple(units), PolyMatrix(U_rows), V, tuple(gens), unit)


def _graded_entry(c, e, which):
    if not c:
        return RatPoly.zero()
    if e.denominator != 1 or e < 0:
        raise DegreeMismatch(f"certificate {which} would need u^{e}")
    return RatPoly.monomial(c, int(e))
