"""Configuration-space side: admissible basis, equivariant lifts and fixed-component restrictions.

Generators ``ω_ij`` (``i < j``) lift to equivariant classes restricting to
``ε(τ, i, j) t'`` on the component labelled τ.  Two lifts of higher-degree
basis elements are available:

* ``"product"``: the product of the generator lifts.
* ``"orthogonal"``: the class coming from the product of spheres
  ``Y = ∏ S²_ij``.  In each degree the surjection ``H(Y) → H(X)`` is split by
  the orthogonal complement of its kernel, and a basis element is lifted to
  its preimage in that complement.  Each y-monomial restricts as the product
  of its generators, so the lift's restriction is a rational combination.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .conventions import CONF_LIFTS
from .errors import NonPolynomialEntry, SizeLimit, SizeMismatch
from .matrix import PolyMatrix, fraction_solve, solve_rational, matmul_rational
from .poly import RatPoly
from . import symgroup as sg


def _canon(mono):
    return tuple(sorted(mono, key=lambda f: (f[1], f[0])))


@lru_cache(maxsize=None)
def _admissible(n):
    basis = [()]
    for j in range(2, n + 1):
        basis = [b + ((i, j),) for b in basis for i in range(1, j)] + basis
    return tuple(sorted(basis, key=lambda b: (len(b), b)))


def admissible_basis(n, max_n=sg.MAX_N):
    """Square-free products of ``ω_ij`` with distinct increasing second indices."""
    if n < 1:
        raise SizeMismatch("n must be positive")
    if n > max_n:
        raise SizeLimit(f"n = {n} exceeds the configured maximum {max_n}")
    return list(_admissible(n))


def degree(b):
    return 2 * len(b)


def format_monomial(b):
    return "*".join(f"w{i}{j}" if max(i, j) < 10 else f"w{i},{j}" for i, j in b) or "1"


def epsilon(tau, i, j):
    """+1 when ``x_i`` lies before ``x_j`` on the component labelled ``tau``."""
    if i == j:
        raise ValueError("epsilon needs distinct indices")
    return 1 if tau.index(i) < tau.index(j) else -1


def _eps_product(mono, pos):
    s = 1
    for i, j in mono:
        if pos[i] > pos[j]:
            s = -s
    return s


def restrict_monomial(b, tau):
    """Restriction of the product lift of ``b`` to the component ``tau``."""
    s = 1
    for i, j in b:
        s *= epsilon(tau, i, j)
    return RatPoly.monomial(s, len(b))


@lru_cache(maxsize=None)
def normal_form(mono):
    """Coordinates of a square-free product of generators in the admissible basis.

    ``mono`` is a tuple of pairs ``(i, j)`` with ``i < j``.  Two factors sharing
    a second index are rewritten with ``ω_ij ω_kj = ω_ik ω_kj - ω_ik ω_ij``
    (``i < k < j``), which lowers the sum of second indices.
    """
    mono = _canon(mono)
    if len(set(mono)) < len(mono):
        return {}
    seen = {}
    for i, j in mono:
        if j in seen:
            a, b = sorted((seen[j], i))
            rest = [f for f in mono if f not in ((a, j), (b, j))]
            out = {}
            for coeff, extra in ((1, [(a, b), (b, j)]), (-1, [(a, b), (a, j)])):
                for k, v in normal_form(_canon(rest + extra)).items():
                    out[k] = out.get(k, 0) + coeff * v
            return {k: v for k, v in out.items() if v}
        seen[j] = i
    return {mono: 1}


def signed_generator(i, j):
    """``ω_ij`` as ``(sign, (min, max))`` using ``ω_ji = -ω_ij``."""
    return (1, (i, j)) if i < j else (-1, (j, i))


def pairs(n):
    return [(i, j) for j in range(2, n + 1) for i in range(1, j)]


@lru_cache(maxsize=None)
def _y_monomials(n, k):
    return tuple(_canon(c) for c in combinations(pairs(n), k))


@lru_cache(maxsize=None)
def arnold_matrix(n, k):
    """Constant matrix of ``H^{2k}(Y) → H^{2k}(X)``: admissible rows, y-monomial columns."""
    rows = [b for b in _admissible(n) if len(b) == k]
    index = {b: r for r, b in enumerate(rows)}
    cols = _y_monomials(n, k)
    M = [[0] * len(cols) for _ in rows]
    for c, m in enumerate(cols):
        for b, v in normal_form(m).items():
            M[index[b]][c] = v
    return M


@lru_cache(maxsize=None)
def orthogonal_lift(n, k):
    """``V = Mᵀ (M Mᵀ)⁻¹``: column b holds the y-coordinates of the lift of the b-th degree-k element."""
    M = arnold_matrix(n, k)
    MMt = matmul_rational(M, [list(c) for c in zip(*M)])
    W = solve_rational(MMt, [[int(i == j) for j in range(len(M))] for i in range(len(M))])
    return matmul_rational([list(c) for c in zip(*M)], W)


def _check_lift(lift):
    if lift not in CONF_LIFTS:
        raise ValueError(f"unknown lift {lift!r}")


@lru_cache(maxsize=None)
def _restriction_rows(n, lift):
    perms = sg.all_permutations(n)
    basis = _admissible(n)
    positions = [{x: k for k, x in enumerate(tau)} for tau in perms]
    rows = [[None] * len(basis) for _ in perms]
    if lift == "product":
        for c, b in enumerate(basis):
            for r, pos in enumerate(positions):
                rows[r][c] = RatPoly.monomial(_eps_product(b, pos), len(b))
        return rows
    for k in range(n):
        cols = [c for c, b in enumerate(basis) if len(b) == k]
        ymons = _y_monomials(n, k)
        V = orthogonal_lift(n, k)
        for r, pos in enumerate(positions):
            signs = [_eps_product(m, pos) for m in ymons]
            for local, c in enumerate(cols):
                val = sum((s * V[m][local] for m, s in enumerate(signs) if V[m][local]), Fraction(0))
                rows[r][c] = RatPoly.monomial(val, k)
    return rows


def conf_restriction_matrix(n, lift="orthogonal"):
    """``(matrix, col_degrees)``: lifted admissible basis restricted to all components."""
    _check_lift(lift)
    admissible_basis(n)
    return PolyMatrix(_restriction_rows(n, lift)), [degree(b) for b in _admissible(n)]


def component_row_order(sigma, perms):
    """Row order for ``P_σ``: row τ of ``P_σ R`` is row ``σ⁻¹τ`` of ``R``."""
    index = sg.index_of(perms)
    inv = sg.inverse(sigma)
    return [index[sg.compose(inv, tau)] for tau in perms]


def conf_action_matrix(sigma, n, lift="orthogonal"):
    """``ρ_X(σ)`` solving ``R_X ρ = P_σ R_X``; entries must be polynomials in t'."""
    R, _ = conf_restriction_matrix(n, lift)
    target = R.permute_rows(component_row_order(sigma, sg.all_permutations(n)))
    X = fraction_solve(R, target)
    try:
        return X.to_polynomial()
    except NonPolynomialEntry as exc:
        raise NonPolynomialEntry(f"action of {sigma}: {exc}", exc.witness) from None


def ordinary_action_matrix(sigma, n):
    """Constant matrix of ``ω_ij ↦ ω_{σ(i)σ(j)}`` on the admissible basis, via Arnold rewriting."""
    basis = _admissible(n)
    index = {b: k for k, b in enumerate(basis)}
    size = len(basis)
    out = [[Fraction(0)] * size for _ in range(size)]
    for c, b in enumerate(basis):
        s = 1
        image = []
        for i, j in b:
            sgn, f = signed_generator(sigma[i - 1], sigma[j - 1])
            s *= sgn
            image.append(f)
        for nb, v in normal_form(_canon(image)).items():
            out[index[nb]][c] += s * v
    return out


def graded_traces(n, sigma):
    basis = _admissible(n)
    A = ordinary_action_matrix(sigma, n)
    out = {}
    for k, b in enumerate(basis):
        out[degree(b)] = out.get(degree(b), 0) + A[k][k]
    return out


def equivariant_relation_probe(n):
    """Check ``ω̃_ij² = t'²`` and the three-term identity ``= -t'²`` on every component."""
    if n < 3:
        raise SizeMismatch("the three-term identity needs n >= 3")
    perms = sg.all_permutations(n)
    t2 = RatPoly.monomial(1, 2)
    square_failures = []
    for i, j in pairs(n):
        for tau in perms:
            v = restrict_monomial(((i, j),), tau)
            if v * v != t2:
                square_failures.append({"pair": [i, j], "component": list(tau)})
    triple_failures = []
    for i, j, k in _ordered_triples(n):
        for tau in perms:
            e = lambda a, b: epsilon(tau, a, b)
            val = e(i, j) * e(j, k) + e(j, k) * e(k, i) + e(k, i) * e(i, j)
            if RatPoly.monomial(val, 2) != -t2:
                triple_failures.append({"triple": [i, j, k], "component": list(tau)})
    return {
        "square": {"passed": not square_failures, "failures": square_failures},
        "three_term": {"passed": not triple_failures, "failures": triple_failures},
    }


def _ordered_triples(n):
    idx = range(1, n + 1)
    return [(i, j, k) for i in idx for j in idx for k in idx if len({i, j, k}) == 3]
