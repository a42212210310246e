"""Dense matrices over Q, Q[t] and Q[q, 1/q] with exact solving.

Elimination over Q[t] is fraction-free Gauss-Jordan run on Kronecker
images: every integer polynomial ``p`` is replaced by ``p(2**B)`` where ``B``
exceeds the bit size of any minor of the augmented matrix.  Evaluation at
``2**B`` is a ring map, Bareiss divisions are exact in Z[t], so they stay
exact on the packed integers and every intermediate minor unpacks uniquely.
"""

from fractions import Fraction
from math import lcm
import random

from .errors import SingularMatrix, SizeMismatch, NonPolynomialEntry
from .poly import RatPoly, LaurentPoly, RatFunc


class PolyMatrix:
    """Immutable dense matrix whose entries share one ring type."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, entries):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise ValueError("PolyMatrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        self.entries = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def identity(cls, n, kind=RatPoly):
        one, zero = kind.one(), kind.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols, kind=RatPoly):
        zero = kind.zero()
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def from_constants(cls, rows, kind=RatPoly):
        return cls([[kind.constant(c) for c in row] for row in rows])

    @property
    def kind(self):
        return type(self.entries[0][0])

    @property
    def shape(self):
        return self.rows, self.cols

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(self.entries)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __add__(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return PolyMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.kind.zero()
        other_cols = list(zip(*other.entries))
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            line = []
            for col in other_cols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                line.append(acc)
            out.append(line)
        return PolyMatrix(out)

    def scale(self, c):
        return self.map(lambda e: e * c)

    def map(self, f):
        return PolyMatrix([[f(e) for e in r] for r in self.entries])

    def transpose(self):
        return PolyMatrix(list(zip(*self.entries)))

    def submatrix(self, rows, cols):
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def permute_rows(self, order):
        """New row ``i`` is old row ``order[i]``."""
        return PolyMatrix([self.entries[k] for k in order])

    def evaluate(self, x):
        return [[e(x) for e in r] for r in self.entries]

    def is_zero(self):
        return not any(e for r in self.entries for e in r)

    def to_polynomial(self):
        """Convert RatFunc entries to RatPoly; NonPolynomialEntry names the first offender."""
        out = []
        for i, r in enumerate(self.entries):
            line = []
            for j, e in enumerate(r):
                if isinstance(e, RatFunc):
                    if not e.is_polynomial():
                        raise NonPolynomialEntry(
                            f"entry ({i}, {j}) = {e} has a denominator",
                            {"row": i, "col": j, "entry": str(e)})
                    e = e.num
                line.append(e)
            out.append(line)
        return PolyMatrix(out)

    def to_laurent(self):
        """Convert RatFunc entries in q with monomial denominators to LaurentPoly."""
        out = []
        for i, r in enumerate(self.entries):
            line = []
            for j, e in enumerate(r):
                if isinstance(e, RatFunc):
                    if not e.den.is_monomial():
                        raise NonPolynomialEntry(
                            f"entry ({i}, {j}) = {e} is not a Laurent polynomial",
                            {"row": i, "col": j, "entry": str(e)})
                    e = LaurentPoly.from_ratpoly(e.num, -e.den.degree)
                line.append(e)
            out.append(line)
        return PolyMatrix(out)

    def det(self):
        if not self.is_square():
            raise SizeMismatch("determinant of a non-square matrix")
        kind = self.kind
        if kind is RatFunc:
            return _det_field(self)
        graded = graded_offsets(self)
        if graded is not None:
            consts = [[_leading(e) for e in r] for r in self.entries]
            d = det_rational(consts)
            total = sum(graded[1]) - sum(graded[0])
            if kind is LaurentPoly:
                return LaurentPoly.monomial(d, total)
            return RatPoly.monomial(d, total) if d else RatPoly.zero()
        if kind is LaurentPoly:
            polys, shifts = _laurent_columns_to_poly(self.entries)
            d = _det_poly(polys)
            return LaurentPoly.from_ratpoly(d, -sum(shifts))
        return _det_poly([list(r) for r in self.entries])

    def __repr__(self):
        body = ",\n ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries)
        return f"PolyMatrix([{body}])"


def _leading(e):
    if isinstance(e, RatPoly):
        return e.lc
    if isinstance(e, LaurentPoly):
        return next(iter(e.terms.values())) if e.terms else Fraction(0)
    return Fraction(e)


def _exponent(e):
    if isinstance(e, RatPoly):
        return e.degree
    return next(iter(e.terms))


def column_degrees(M):
    """Per-column monomial degrees if every column is homogeneous, else None.

    A column is homogeneous when all of its nonzero entries are monomials of
    one common degree; an all-zero column counts as degree 0.
    """
    if M.kind not in (RatPoly, LaurentPoly):
        return None
    degs = []
    for j in range(M.cols):
        d = None
        for i in range(M.rows):
            e = M.entries[i][j]
            if not e:
                continue
            if not e.is_monomial():
                return None
            k = _exponent(e)
            if d is None:
                d = k
            elif d != k:
                return None
        degs.append(0 if d is None else d)
    return degs


def graded_offsets(M):
    """``(row_shift, col_shift)`` with every nonzero entry a monomial of degree
    ``col_shift[j] - row_shift[i]``, or None when no such grading exists."""
    if M.kind not in (RatPoly, LaurentPoly):
        return None
    rows, cols = [None] * M.rows, [None] * M.cols
    for start in range(M.rows):
        if rows[start] is not None:
            continue
        rows[start] = 0
        stack = [("r", start)]
        while stack:
            side, k = stack.pop()
            if side == "r":
                for j, e in enumerate(M.entries[k]):
                    if not e:
                        continue
                    if not e.is_monomial():
                        return None
                    want = rows[k] + _exponent(e)
                    if cols[j] is None:
                        cols[j] = want
                        stack.append(("c", j))
                    elif cols[j] != want:
                        return None
            else:
                for i in range(M.rows):
                    e = M.entries[i][k]
                    if not e:
                        continue
                    want = cols[k] - _exponent(e)
                    if rows[i] is None:
                        rows[i] = want
                        stack.append(("r", i))
                    elif rows[i] != want:
                        return None
    return rows, [0 if c is None else c for c in cols]


# -- constant (rational) linear algebra ------------------------------------


def _gauss_jordan_ff(a, n):
    """Fraction-free Gauss-Jordan on the integer matrix ``a`` (n rows, in place).

    Returns the final pivot ``d``; afterwards the left n x n block is ``d*I``
    and the remaining columns hold ``d * inverse(left) * right``.
    """
    width = len(a[0])
    prev = 1
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            raise SingularMatrix(f"no pivot in column {k}")
        if p != k:
            a[k], a[p] = a[p], a[k]
        rk = a[k]
        piv = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            f = ri[k]
            if f == 0:
                if piv != prev:
                    for j in range(k + 1, width):
                        if ri[j]:
                            ri[j] = piv * ri[j] // prev
                if i < k:
                    ri[i] = piv
                continue
            for j in range(k + 1, width):
                ri[j] = (piv * ri[j] - f * rk[j]) // prev
            ri[k] = 0
            if i < k:
                ri[i] = piv
        prev = piv
    return prev


def _integer_rows(rows):
    out = []
    for r in rows:
        fr = [c if type(c) is Fraction else Fraction(c) for c in r]
        m = lcm(*(c.denominator for c in fr)) if fr else 1
        out.append([int(c * m) for c in fr])
    return out


def solve_rational(E, F):
    """Exact solution ``Y`` of ``E Y = F`` for a square nonsingular rational ``E``."""
    n = len(E)
    if any(len(r) != n for r in E):
        raise SizeMismatch("coefficient matrix must be square")
    if len(F) != n:
        raise SizeMismatch("right-hand side has the wrong number of rows")
    m = len(F[0]) if F else 0
    aug = _integer_rows([list(E[i]) + list(F[i]) for i in range(n)])
    d = _gauss_jordan_ff(aug, n)
    return [[Fraction(aug[i][n + j], d) for j in range(m)] for i in range(n)]


def inverse_rational(E):
    n = len(E)
    return solve_rational(E, [[int(i == j) for j in range(n)] for i in range(n)])


def det_rational(E):
    n = len(E)
    if n == 0:
        return Fraction(1)
    scales = []
    rows = []
    for r in E:
        fr = [Fraction(c) for c in r]
        m = lcm(*(c.denominator for c in fr))
        scales.append(m)
        rows.append([int(c * m) for c in fr])
    sign = 1
    prev = 1
    a = rows
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (piv * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = piv
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * a[n - 1][n - 1], denom)


def rref_rational(E):
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)`` without zero rows."""
    a = [[Fraction(c) for c in r] for r in E]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(a)):
            if a[i][c]:
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        pr = [x * inv for x in a[r]]
        a[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(len(a)):
            if i != r:
                f = a[i][c]
                if f:
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank_rational(E):
    return len(rref_rational(E)[1])


def nullspace_rational(E, ncols=None):
    """Basis of ``{v : E v = 0}`` (one vector per free column)."""
    if not E:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, piv = rref_rational(E)
    n = len(E[0])
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matmul_rational(A, B):
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in Bt] for r in A]


# -- Kronecker-packed polynomial elimination -------------------------------


def _pack(coeffs, bits):
    v = 0
    for c in reversed(coeffs):
        v = (v << bits) + c
    return v


def _unpack(v, bits):
    out = []
    base = 1 << bits
    half = base >> 1
    mask = base - 1
    while v:
        r = v & mask
        if r >= half:
            r -= base
        out.append(r)
        v = (v - r) >> bits
    return out


def _int_poly_rows(rows):
    """Scale each row of RatPoly entries to integer coefficient lists."""
    out = []
    for r in rows:
        m = lcm(*(c.denominator for e in r for c in e.coeffs)) if any(r) else 1
        out.append([[int(c * m) for c in e.coeffs] for e in r])
    return out


def _bits_for(int_rows):
    bits = 2
    for r in int_rows:
        s = sum(abs(c) for e in r for c in e)
        bits += max(s, 1).bit_length()
    return bits


def _det_poly(rows):
    n = len(rows)
    scales = []
    for r in rows:
        m = lcm(*(c.denominator for e in r for c in e.coeffs)) if any(r) else 1
        scales.append(m)
    ints = _int_poly_rows(rows)
    bits = _bits_for(ints)
    a = [[_pack(e, bits) for e in r] for r in ints]
    sign, prev = 1, 1
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            return RatPoly.zero()
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (piv * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = piv
    denom = 1
    for s in scales:
        denom *= s
    return RatPoly(_unpack(sign * a[n - 1][n - 1], bits)) * Fraction(1, denom)


def _laurent_columns_to_poly(entries):
    """Shift each column by ``q**s_j`` so all exponents are >= 0."""
    ncols = len(entries[0])
    shifts = []
    for j in range(ncols):
        vals = [e.valuation() for r in entries for e in [r[j]] if e]
        shifts.append(-min(vals) if vals else 0)
    polys = [[_nonnegative_laurent_to_poly(e.shift(shifts[j])) for j, e in enumerate(r)]
             for r in entries]
    return polys, shifts


def _nonnegative_laurent_to_poly(e):
    if not e:
        return RatPoly.zero()
    p, v = e.to_ratpoly()
    return p.shift(v)


def _solve_poly(Mrows, Brows):
    """Return ``(d, N)`` with ``M N = d B`` over Q[t]: ``d`` a RatPoly, ``N`` rows of RatPoly."""
    n = len(Mrows)
    m = len(Brows[0])
    ints = _int_poly_rows([list(Mrows[i]) + list(Brows[i]) for i in range(n)])
    bits = _bits_for(ints)
    aug = [[_pack(e, bits) for e in r] for r in ints]
    d = _gauss_jordan_ff(aug, n)
    dpoly = RatPoly(_unpack(d, bits))
    N = [[RatPoly(_unpack(aug[i][n + j], bits)) for j in range(m)] for i in range(n)]
    return dpoly, N


def _modular_check(Mrows, X, Brows):
    # one random evaluation modulo a large prime; exact arithmetic, catches packing bugs
    p = (1 << 61) - 1
    x0 = random.Random(12345).randrange(2, p - 1)

    def ev(e):
        if isinstance(e, RatFunc):
            return ev(e.num) * pow(ev(e.den), -1, p) % p
        acc = 0
        for c in reversed(e.coeffs):
            acc = (acc * x0 + c.numerator * pow(c.denominator, -1, p)) % p
        return acc

    n = len(Mrows)
    Mv = [[ev(e) for e in r] for r in Mrows]
    Xv = [[ev(e) for e in r] for r in X]
    for i in range(n):
        for j in range(len(Brows[0])):
            s = sum(Mv[i][k] * Xv[k][j] for k in range(n)) % p
            if s != ev(Brows[i][j]):
                raise ArithmeticError("fraction_solve self-check failed")


def fraction_solve(M, B, check=True):
    """Solve ``M X = B`` over the fraction field; entries of ``X`` are RatFunc.

    ``M`` and ``B`` hold RatPoly (in t) or LaurentPoly (in q) entries.  For
    Laurent input the returned RatFunc are in q, with negative powers moved
    into the denominator.
    """
    if not M.is_square():
        raise SizeMismatch("fraction_solve needs a square coefficient matrix")
    if M.rows != B.rows:
        raise SizeMismatch(f"row mismatch: {M.shape} vs {B.shape}")
    kind = M.kind
    if kind not in (RatPoly, LaurentPoly):
        raise TypeError(f"unsupported entry type {kind.__name__}")
    cdeg = column_degrees(M)
    fdeg = column_degrees(B) if cdeg is not None else None
    if cdeg is not None and fdeg is not None:
        E = [[_leading(e) for e in r] for r in M.entries]
        F = [[_leading(e) for e in r] for r in B.entries]
        try:
            Y = solve_rational(E, F)
        except SingularMatrix:
            raise SingularMatrix("matrix is singular over the fraction field") from None
        return PolyMatrix([[_monomial_func(Y[i][j], fdeg[j] - cdeg[i]) for j in range(B.cols)]
                           for i in range(M.rows)])
    if kind is LaurentPoly:
        Mp, sM = _laurent_columns_to_poly(M.entries)
        Bp, sB = _laurent_columns_to_poly(B.entries)
    else:
        Mp, sM = [list(r) for r in M.entries], [0] * M.cols
        Bp, sB = [list(r) for r in B.entries], [0] * B.cols
    try:
        d, N = _solve_poly(Mp, Bp)
    except SingularMatrix:
        raise SingularMatrix("matrix is singular over the fraction field") from None
    X = [[RatFunc(N[i][j], d) for j in range(B.cols)] for i in range(M.rows)]
    if check:
        _modular_check(Mp, X, Bp)
    if any(sM) or any(sB):
        X = [[_shift_func(X[i][j], sM[i] - sB[j]) for j in range(B.cols)] for i in range(M.rows)]
    return PolyMatrix(X)


def _monomial_func(c, e):
    if not c:
        return RatFunc.zero()
    if e >= 0:
        return RatFunc(RatPoly.monomial(c, e))
    return RatFunc(RatPoly.constant(c), RatPoly.monomial(1, -e))


def _shift_func(f, e):
    if not f or e == 0:
        return f
    if e > 0:
        return RatFunc(f.num.shift(e), f.den)
    return RatFunc(f.num, f.den.shift(-e))


def _det_field(M):
    a = [list(r) for r in M.entries]
    n = M.rows
    det = RatFunc.one()
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return RatFunc.zero()
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        piv = a[k][k]
        det = det * piv
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return det


def solution_residual_is_zero(M, X, B):
    """Exact check ``M X == B`` (RatFunc-aware)."""
    Mf = M.map(lambda e: e if isinstance(e, RatFunc) else _to_func(e))
    Bf = B.map(lambda e: e if isinstance(e, RatFunc) else _to_func(e))
    return (Mf @ X) == Bf


def _to_func(e):
    if isinstance(e, LaurentPoly):
        p, v = e.to_ratpoly()
        return _shift_func(RatFunc(p), v)
    return RatFunc(e)


def permutation_matrix(order, kind=RatPoly):
    """Matrix ``P`` with ``(P v)[i] = v[order[i]]``."""
    n = len(order)
    one, zero = kind.one(), kind.zero()
    return PolyMatrix([[one if j == order[i] else zero for j in range(n)] for i in range(n)])
