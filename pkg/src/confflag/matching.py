"""The matching matrix A = R_X⁻¹ R_F and the checks built on it.

``R_X`` restricts the lifted admissible basis of the configuration space to
its fixed components, ``R_F`` restricts the harmonic basis of the flag
manifold to its fixed flags.  After pairing component rows with flag rows,
``R_X A = R_F`` defines ``A`` over the fraction field of Q[t'].
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .conventions import DEFAULT, Conventions
from .errors import (EquivarianceFailure, MismatchWithPsi, NonConstantDeterminant,
                     NonPolynomialEntry, OddPowerEntry, SingularDeterminant, SingularMatrix)
from .matrix import PolyMatrix, fraction_solve, rank_rational
from .poly import RatPoly
from .series import in_t, phi_psi
from .smith import graded_smith_form
from . import conf, flag
from . import symgroup as sg


@dataclass
class MatchingMatrix:
    n: int
    A: PolyMatrix
    row_degrees: list
    col_degrees: list
    row_labels: list
    col_labels: list
    det: RatPoly
    conventions: Conventions = DEFAULT
    extra: dict = field(default_factory=dict)

    @property
    def det_degree(self):
        return (sum(self.col_degrees) - sum(self.row_degrees)) // 2

    def in_u(self):
        """Entries rewritten in ``u' = t'^2``; OddPowerEntry if an odd power appears."""
        def conv(i, j, e):
            if not e:
                return RatPoly.zero()
            if any(c for k, c in enumerate(e.coeffs) if k % 2):
                raise OddPowerEntry(f"entry ({i}, {j}) = {e} has an odd power of t'",
                                    {"row": i, "col": j, "entry": str(e)})
            return RatPoly(e.coeffs[::2])
        return PolyMatrix([[conv(i, j, e) for j, e in enumerate(r)]
                           for i, r in enumerate(self.A.entries)])

    def coefficient(self, k):
        """Constant matrix of the ``u'^k`` (``t'^{2k}``) coefficients."""
        return [[e.coeff(2 * k) for e in r] for r in self.A.entries]


def row_pairing(n, labels="calibrated"):
    """``order[τ] = index of the fixed flag paired with component τ``."""
    perms = sg.all_permutations(n)
    index = sg.index_of(perms)
    if labels == "calibrated":
        from .pointmap import calibrate_fixed_labels
        table, _ = calibrate_fixed_labels(n)
        return [index[table[tau]] for tau in perms]
    if labels == "inverse":
        return [index[sg.inverse(tau)] for tau in perms]
    return list(range(len(perms)))


def check_matching_shape(A, row_degrees, col_degrees):
    """Raise the named falsification if ``A`` is not a polynomial, even-shift, graded matrix."""
    for i, r in enumerate(A.entries):
        for j, e in enumerate(r):
            if not e:
                continue
            shift = col_degrees[j] - row_degrees[i]
            if shift < 0 or shift % 2:
                raise NonPolynomialEntry(f"entry ({i}, {j}) nonzero below the degree diagonal",
                                         {"row": i, "col": j, "entry": str(e)})
            k = shift // 2
            if not e.is_monomial() or e.degree != k:
                raise NonPolynomialEntry(f"entry ({i}, {j}) = {e} is not homogeneous of degree {k}",
                                         {"row": i, "col": j, "entry": str(e)})
            if k % 2:
                raise OddPowerEntry(f"entry ({i}, {j}) = {e} is an odd power of t'",
                                    {"row": i, "col": j, "entry": str(e)})


@lru_cache(maxsize=None)
def compute_matching_matrix(n, conventions=DEFAULT):
    RX, rdeg = conf.conf_restriction_matrix(n, conventions.conf_lift)
    RF, cdeg = flag.flag_restriction_matrix(n, conventions.metric)
    RFp = RF.permute_rows(row_pairing(n, conventions.labels))
    try:
        X = fraction_solve(RX, RFp)
    except SingularMatrix:
        raise SingularDeterminant("configuration restriction matrix is singular") from None
    A = X.to_polynomial()
    check_matching_shape(A, rdeg, cdeg)
    d = A.det()
    D = (sum(cdeg) - sum(rdeg)) // 2
    if not d:
        raise SingularDeterminant("det A vanishes", {"n": n})
    if not d.is_monomial() or d.degree != D:
        raise SingularDeterminant(f"det A = {d} is not c t'^{D}", {"det": str(d), "expected_degree": D})
    return MatchingMatrix(
        n, A, rdeg, cdeg,
        [conf.format_monomial(b) for b in conf.admissible_basis(n)],
        [str(h) for h in flag.harmonic_basis(n, conventions.metric)],
        d, conventions)


@dataclass
class CokernelReport:
    exponents: tuple
    invariant_factors: tuple
    series: list
    psi: list
    smith: object


def cokernel_report(M):
    """Graded Smith form over Q[u'] and the cokernel series, compared with ψ."""
    S = graded_smith_form(M.in_u(), M.col_degrees, M.row_degrees, unit=4)
    series = S.cokernel_series()
    psi = in_t(phi_psi(M.n)[1])
    if series != psi:
        raise MismatchWithPsi(f"cokernel series {series} differs from psi {psi}",
                              {"series": series, "psi": psi})
    return CokernelReport(S.exponents, S.invariant_factors, series, psi, S)


def extract_Ak(M, k):
    """Blocks of the ``u'^k`` coefficient: ``{flag degree d: (conf degree d - 4k, matrix)}``."""
    C = M.coefficient(k)
    out = {}
    for d in sorted(set(M.col_degrees)):
        target = d - 4 * k
        rows = [i for i, r in enumerate(M.row_degrees) if r == target]
        cols = [j for j, c in enumerate(M.col_degrees) if c == d]
        if rows and cols:
            out[d] = (target, [[C[i][j] for j in cols] for i in rows])
    return out


def rank_Ak(M, k):
    C = M.coefficient(k)
    return rank_rational(C) if any(any(r) for r in C) else 0


def _const_matrix(rows):
    return PolyMatrix.from_constants(rows)


def equivariance_audit(n, conventions=DEFAULT, elements=None, raise_on_failure=True):
    """Check ``ρ_X(σ) A = A ρ_F(σ)`` and the graded statement for each ``A_k``."""
    M = compute_matching_matrix(n, conventions)
    if elements is None:
        elements = sg.all_permutations(n) if n <= 4 else sg.adjacent_transpositions(n)
    kmax = M.det_degree // 2
    report = {"checked": [], "failures": []}
    for sigma in elements:
        rho_x = conf.conf_action_matrix(sigma, n, conventions.conf_lift)
        rho_f_const = flag.flag_action_matrix(sigma, n, conventions.metric)
        rho_f = _const_matrix(rho_f_const)
        lhs, rhs = rho_x @ M.A, M.A @ rho_f
        failure = None
        if lhs != rhs:
            i, j = next((i, j) for i in range(lhs.rows) for j in range(lhs.cols)
                        if lhs[i, j] != rhs[i, j])
            failure = {"sigma": list(sigma), "check": "full", "entry": [i, j]}
        else:
            bar_x = [[e.coeff(0) for e in r] for r in rho_x.entries]
            ordinary = conf.ordinary_action_matrix(sigma, n)
            if bar_x != ordinary:
                failure = {"sigma": list(sigma), "check": "reduction_matches_ordinary_action"}
            for k in range(kmax + 1):
                if failure:
                    break
                Ak = _const_matrix(M.coefficient(k))
                if _const_matrix(bar_x) @ Ak != Ak @ rho_f:
                    failure = {"sigma": list(sigma), "check": f"A_{k}"}
        if failure:
            report["failures"].append(failure)
            if raise_on_failure:
                raise EquivarianceFailure(f"equivariance fails for {sigma}", failure)
        report["checked"].append(list(sigma))
    report["passed"] = not report["failures"]
    return report


def graded_character_table(n, side, metric="apolar"):
    """``{degree: {partition: multiplicity}}`` for the ordinary Σ_n-action."""
    reps = {}
    for p in sg.all_permutations(n):
        reps.setdefault(sg.cycle_type(p), p)
    traces = {}
    for mu, p in reps.items():
        t = conf.graded_traces(n, p) if side == "conf" else flag.graded_traces(n, p, metric)
        for d, v in t.items():
            traces.setdefault(d, {})[mu] = v
    return {d: sg.decompose_into_irreducibles(vals) for d, vals in sorted(traces.items())}


def total_multiplicities(table):
    out = {}
    for mults in table.values():
        for lam, m in mults.items():
            out[lam] = out.get(lam, 0) + m
    return out


def is_regular(n, totals):
    return all(totals.get(lam, 0) == sg.dimension(lam) for lam in sg.partitions(n))


def cokernel_character(n, metric="apolar"):
    """``(χ_conf(t) - χ_flag(t)) / (1 - t⁴)`` per irreducible; all entries must be >= 0."""
    conf_t = graded_character_table(n, "conf")
    flag_t = graded_character_table(n, "flag", metric)
    out = {}
    for lam in sg.partitions(n):
        top = max(list(conf_t) + list(flag_t))
        diff = [conf_t.get(d, {}).get(lam, 0) - flag_t.get(d, {}).get(lam, 0)
                for d in range(top + 1)]
        quotient = [0] * (top + 1)
        for d in range(top + 1):
            quotient[d] = diff[d] + (quotient[d - 4] if d >= 4 else 0)
        if any(quotient[top - 3:]):
            raise MismatchWithPsi(f"character difference for {lam} is not divisible by 1 - t^4")
        while quotient and quotient[-1] == 0:
            quotient.pop()
        out[lam] = quotient
    return out


# -- two-block Grassmannian with a single point ----------------------------


def conf_r1_restriction_matrix(n):
    """Powers of ``β = Σ_j ω̃_{x, y_j}``; on the word with k Y's before X, ``β ↦ (n-1-2k) t'``."""
    words = sg.interleavings(1, n - 1)
    rows = []
    for word in words:
        k = word.index("X")
        rows.append([RatPoly.monomial(Fraction(n - 1 - 2 * k) ** m, m) for m in range(n)])
    return PolyMatrix(rows), [2 * m for m in range(n)]


def r1_matching_matrix(n, metric="apolar"):
    RX, rdeg = conf_r1_restriction_matrix(n)
    RF, cdeg = flag.grassmann_restriction_matrix(1, n - 1, metric)
    try:
        X = fraction_solve(RX, RF)
    except SingularMatrix:
        raise SingularDeterminant("configuration side restriction is singular") from None
    A = X.to_polynomial()
    check_matching_shape(A, rdeg, cdeg)
    d = A.det()
    if not d:
        raise SingularDeterminant("det of the r = 1 matching matrix vanishes", {"n": n})
    if d.degree != 0:
        raise NonConstantDeterminant(f"det = {d} is not constant", {"det": str(d)})
    return MatchingMatrix(n, A, rdeg, cdeg, [f"beta^{m}" for m in range(n)],
                          [str(h) for h in flag.grassmann_invariant_basis(1, n - 1, metric)],
                          d, Conventions(metric=metric))
