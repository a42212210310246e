"""Equivariant K-theory version of the matching, over Q[q, 1/q].

Configuration side: square-free products of the spinor line classes ``H_ij``
(same shape as the admissible basis); ``H_ij`` restricts to ``q^{ε(τ,i,j)}``.
Flag side: line-bundle monomials ``L^a`` with ``0 <= a_i <= n-i``, restricting
to ``q^{Σ a_i μ_{w(i)}}``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .conventions import DEFAULT
from .errors import SingularDeterminant, SingularMatrix
from .flag import principal_weights
from .matrix import PolyMatrix, fraction_solve, rank_rational, solve_rational
from .matching import row_pairing
from .poly import LaurentPoly, RatFunc, cyclotomic_factor
from . import conf
from . import symgroup as sg


def steinberg_monomials(n):
    """Exponent vectors ``a`` with ``0 <= a_i <= n - i``, ordered by (degree, lexicographic)."""
    mons = list(product(*(range(n - i + 1) for i in range(1, n + 1))))
    return sorted(mons, key=lambda a: (sum(a), a))


def flag_K_restriction(a, w):
    mu = principal_weights(len(w))
    return LaurentPoly.monomial(1, sum(ai * mu[wi - 1] for ai, wi in zip(a, w)))


def conf_K_restriction(b, tau):
    return LaurentPoly.monomial(1, sum(conf.epsilon(tau, i, j) for i, j in b))


def conf_K_matrix(n):
    perms = sg.all_permutations(n)
    return PolyMatrix([[conf_K_restriction(b, tau) for b in conf.admissible_basis(n)]
                       for tau in perms])


def flag_K_matrix(n):
    perms = sg.all_permutations(n)
    return PolyMatrix([[flag_K_restriction(a, w) for a in steinberg_monomials(n)] for w in perms])


def admissible_indices(n):
    """Cyclotomic indices allowed under each reading of the isotropy bound."""
    return {"rotation_units": list(range(1, n)), "spin_units": list(range(1, 2 * (n - 1) + 1))}


def _factor_record(p):
    f = cyclotomic_factor(p)
    return {
        "unit": [str(f.unit_coeff), f.unit_shift],
        "factors": {str(d): m for d, m in sorted(f.factors.items())},
        "remainder": str(f.remainder),
        "cyclotomic": f.is_cyclotomic(),
    }, f


def ratio_factorization(num, den):
    """Cyclotomic factorization of ``num / den`` with signed multiplicities."""
    fn, fd = cyclotomic_factor(num), cyclotomic_factor(den)
    mults = dict(fn.factors)
    for d, m in fd.factors.items():
        mults[d] = mults.get(d, 0) - m
    mults = {d: m for d, m in sorted(mults.items()) if m}
    return {
        "unit": [str(fn.unit_coeff / fd.unit_coeff), fn.unit_shift - fd.unit_shift],
        "factors": {str(d): m for d, m in mults.items()},
        "indices": sorted(mults),
        "remainder_numerator": str(fn.remainder),
        "remainder_denominator": str(fd.remainder),
        "cyclotomic": fn.is_cyclotomic() and fd.is_cyclotomic(),
    }


@dataclass
class KMatchingMatrix:
    n: int
    A: PolyMatrix
    laurent: bool
    det_conf: LaurentPoly
    det_flag: LaurentPoly
    ratio: dict
    admissible: dict
    extra: dict = field(default_factory=dict)

    @property
    def indices_within(self):
        idx = set(self.ratio["indices"])
        return {k: idx <= set(v) for k, v in self.admissible.items()}


@lru_cache(maxsize=None)
def compute_K_matching(n, labels=DEFAULT.labels):
    RX, RF = conf_K_matrix(n), flag_K_matrix(n)
    RFp = RF.permute_rows(row_pairing(n, labels))
    dx, df = RX.det(), RFp.det()
    if not dx or not df:
        raise SingularDeterminant("a K-theory restriction matrix is singular",
                                  {"det_conf": str(dx), "det_flag": str(df)})
    try:
        A = fraction_solve(RX, RFp)
    except SingularMatrix:
        raise SingularDeterminant("configuration K restriction matrix is singular") from None
    laurent = all(e.den.is_monomial() for r in A.entries for e in r)
    if laurent:
        A = A.to_laurent()
    return KMatchingMatrix(n, A, laurent, dx, df, ratio_factorization(df, dx), admissible_indices(n))


def det_of(K):
    """``det A_K`` as a RatFunc in q (or LaurentPoly when the entries are Laurent)."""
    return K.A.det()


def invert_q(M):
    def inv(e):
        if isinstance(e, LaurentPoly):
            return e.invert_variable()
        # f(1/q) = num(1/q)/den(1/q); clear by q^max(deg)
        a, b = e.num.degree, e.den.degree
        k = max(a, b)
        num = LaurentPoly.from_ratpoly(e.num).invert_variable().shift(k)
        den = LaurentPoly.from_ratpoly(e.den).invert_variable().shift(k)
        np_, vn = num.to_ratpoly()
        dp, vd = den.to_ratpoly()
        return RatFunc(np_.shift(vn), dp.shift(vd))
    return M.map(inv)


def q_inversion_symmetric(K):
    """``A_K(1/q) == A_K(q)``: reversing every axis order negates both weight systems."""
    return invert_q(K.A) == K.A


def freeness_probe_K(n):
    RX, RF = conf_K_matrix(n), flag_K_matrix(n)
    dx, dfl = RX.det(), RF.det()
    rec_x, _ = _factor_record(dx) if dx else ({}, None)
    rec_f, _ = _factor_record(dfl) if dfl else ({}, None)
    at_one_x = [[e(1) for e in r] for r in RX.entries]
    at_one_f = [[e(1) for e in r] for r in RF.entries]
    return {
        "det_conf_nonzero": bool(dx),
        "det_flag_nonzero": bool(dfl),
        "det_conf": str(dx),
        "det_flag": str(dfl),
        "det_conf_factorization": rec_x,
        "det_flag_factorization": rec_f,
        "rank_at_q1_conf": rank_rational(at_one_x),
        "rank_at_q1_flag": rank_rational(at_one_f),
        "connected_components": 1,
    }


def first_order_check_n2():
    """Expand ``q = 1 + ε`` to first order at n = 2 and recover the cohomological matching.

    The ε-coefficients of ``H_12 - 1`` and ``L_1 - L_2`` restrict like ``ω_12``
    and ``t_1 - t_2`` with ``t' = 1``, so solving with them must give diag(1, 2).
    """
    perms = sg.all_permutations(2)

    def first_order(p):
        return sum((Fraction(k) * c for k, c in p.terms.items()), Fraction(0))

    cx = [[Fraction(1), first_order(conf_K_restriction(((1, 2),), tau))] for tau in perms]
    order = row_pairing(2, "inverse")
    cf_rows = []
    for w in perms:
        diff = flag_K_restriction((1, 0), w) - flag_K_restriction((0, 1), w)
        cf_rows.append([Fraction(1), first_order(diff)])
    cf = [cf_rows[k] for k in order]
    return solve_rational(cx, cf)
