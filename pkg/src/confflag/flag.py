"""Flag-manifold side: harmonic polynomials, fixed-flag restrictions and the Σ_n-action.

The harmonic space is spanned by all partial derivatives of the Vandermonde
determinant, so each degree is computed from the one above it.  The
monomial-metric variant is the image of the apolar one under
``t^α ↦ α! t^α``, which is Σ_n-equivariant and turns apolar orthogonality into
ordinary coefficient orthogonality.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .conventions import METRICS
from .errors import SizeLimit, SizeMismatch
from .matrix import PolyMatrix, rref_rational, nullspace_rational, solve_rational
from .mpoly import MPoly, vandermonde
from .poly import RatPoly
from . import symgroup as sg


@dataclass(frozen=True)
class HarmonicElement:
    poly: MPoly
    degree: int

    @property
    def cohomological_degree(self):
        return 2 * self.degree

    def __str__(self):
        return str(self.poly)


def principal_weights(n):
    return tuple(n + 1 - 2 * i for i in range(1, n + 1))


def _check_metric(metric):
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")


def _span_basis(polys, nvars):
    """Echelon basis of the span, primitive, ordered by leading monomial (descending)."""
    monos = sorted({e for p in polys for e in p.terms}, reverse=True)
    if not monos:
        return []
    rows = [[p.terms.get(m, 0) for m in monos] for p in polys]
    R, _ = rref_rational(rows)
    return [MPoly({m: c for m, c in zip(monos, r) if c}, nvars).primitive() for r in R]


@lru_cache(maxsize=None)
def _apolar_levels(n):
    top = n * (n - 1) // 2
    levels = {top: _span_basis([vandermonde(n)], n)}
    for d in range(top - 1, -1, -1):
        levels[d] = _span_basis([h.diff(i) for h in levels[d + 1] for i in range(n)], n)
    return levels


@lru_cache(maxsize=None)
def _levels(n, metric):
    levels = _apolar_levels(n)
    if metric == "apolar":
        return levels
    return {d: [h.factorial_weighted().primitive() for h in hs] for d, hs in levels.items()}


def harmonic_basis(n, metric="apolar", max_n=sg.MAX_N):
    """Graded basis of the harmonic complement to the symmetric-function ideal."""
    _check_metric(metric)
    if n < 1:
        raise SizeMismatch("n must be positive")
    if n > max_n:
        raise SizeLimit(f"n = {n} exceeds the configured maximum {max_n}")
    levels = _levels(n, metric)
    return [HarmonicElement(h, d) for d in sorted(levels) for h in levels[d]]


def is_harmonic(poly, metric="apolar"):
    """Independent check: every power-sum operator ``p_k(∂)`` kills the apolar form."""
    if metric == "monomial":
        poly = MPoly({e: c / _fact(e) for e, c in poly.terms.items()}, poly.nvars)
    return all(not poly.power_sum_operator(k) for k in range(1, poly.nvars + 1))


def _fact(e):
    out = 1
    for a in e:
        for k in range(2, a + 1):
            out *= k
    return out


def restrict_harmonic(h, w):
    """Value of ``h`` at the fixed flag ``w``: substitute ``t_i -> μ_{w(i)} t'``."""
    mu = principal_weights(len(w))
    return RatPoly.monomial(h.poly([mu[x - 1] for x in w]), h.degree)


def flag_restriction_matrix(n, metric="apolar"):
    """``(matrix, col_degrees)``; rows are fixed flags in canonical order."""
    basis = harmonic_basis(n, metric)
    rows = [[restrict_harmonic(h, w) for h in basis] for w in sg.all_permutations(n)]
    return PolyMatrix(rows), [h.cohomological_degree for h in basis]


class _Coordinates:
    """Coordinates of polynomials with respect to one graded basis block."""

    def __init__(self, block):
        self.block = block
        monos = sorted({e for h in block for e in h.terms}, reverse=True)
        rows = [[h.terms.get(m, 0) for m in monos] for h in block]
        _, piv = rref_rational(rows)
        self.pivots = [monos[k] for k in piv]
        self.E = [[h.terms.get(m, Fraction(0)) for h in block] for m in self.pivots]

    def __call__(self, polys):
        F = [[p.terms.get(m, Fraction(0)) for p in polys] for m in self.pivots]
        C = solve_rational(self.E, F)
        for j, p in enumerate(polys):
            back = MPoly({}, p.nvars)
            for k, h in enumerate(self.block):
                if C[k][j]:
                    back = back + h * C[k][j]
            if back != p:
                raise ValueError("polynomial is not in the span of the basis block")
        return C


@lru_cache(maxsize=None)
def _coordinate_maps(n, metric):
    levels = _levels(n, metric)
    return {d: _Coordinates(levels[d]) for d in levels}


def flag_action_matrix(sigma, n, metric="apolar"):
    """Constant matrix of ``h ↦ h(t_{σ(1)}, …, t_{σ(n)})`` on the harmonic basis."""
    if len(sigma) != n:
        raise SizeMismatch("permutation size does not match n")
    levels = _levels(n, metric)
    coords = _coordinate_maps(n, metric)
    size = sum(len(v) for v in levels.values())
    out = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for d in sorted(levels):
        block = levels[d]
        C = coords[d]([h.permute_variables(sigma) for h in block])
        for i in range(len(block)):
            for j in range(len(block)):
                out[offset + i][offset + j] = C[i][j]
        offset += len(block)
    return out


def graded_traces(n, sigma, metric="apolar"):
    """Trace of ``σ`` on each harmonic degree (keyed by cohomological degree)."""
    levels = _levels(n, metric)
    A = flag_action_matrix(sigma, n, metric)
    out, offset = {}, 0
    for d in sorted(levels):
        k = len(levels[d])
        out[2 * d] = sum(A[offset + i][offset + i] for i in range(k))
        offset += k
    return out


# -- two-block Grassmannians ------------------------------------------------


def _orbit_reps(r, s, d):
    def parts(total, k, cap):
        if k == 0:
            if total == 0:
                yield ()
            return
        for a in range(min(total, cap), -1, -1):
            for rest in parts(total - a, k - 1, a):
                yield (a,) + rest
    for a in range(d + 1):
        for left in parts(a, r, a):
            for right in parts(d - a, s, d - a):
                yield left + right


def _orbit_sum(rep, r, n):
    left = set(permutations(rep[:r]))
    right = set(permutations(rep[r:]))
    return MPoly({lft + rgt: 1 for lft in left for rgt in right}, n)


@lru_cache(maxsize=None)
def _invariant_levels(r, s):
    n = r + s
    levels = {}
    for d in range(r * s + 1):
        orbits = [_orbit_sum(rep, r, n) for rep in _orbit_reps(r, s, d)]
        images = [[o.power_sum_operator(k) for k in range(1, n + 1)] for o in orbits]
        keys = sorted({(k, e) for img in images for k, p in enumerate(img) for e in p.terms})
        rows = [[images[c][k].terms.get(e, 0) for c in range(len(orbits))] for k, e in keys]
        kernel = nullspace_rational(rows, ncols=len(orbits))
        polys = []
        for v in kernel:
            acc = MPoly({}, n)
            for c, o in zip(v, orbits):
                if c:
                    acc = acc + o * c
            polys.append(acc)
        levels[d] = _span_basis(polys, n)
    return levels


def grassmann_invariant_basis(r, s, metric="apolar", max_n=8):
    """Harmonics invariant under permuting ``t_1..t_r`` and ``t_{r+1}..t_n`` separately."""
    _check_metric(metric)
    if r < 0 or s < 0 or r + s < 1:
        raise SizeMismatch("need r, s >= 0 with r + s >= 1")
    if r + s > max_n:
        raise SizeLimit(f"n = {r + s} exceeds the configured maximum {max_n}")
    levels = _invariant_levels(r, s)
    out = []
    for d in sorted(levels):
        for h in levels[d]:
            if metric == "monomial":
                h = h.factorial_weighted().primitive()
            out.append(HarmonicElement(h, d))
    return out


def coset_representative(word):
    """Fixed flag for an interleaving: X positions feed ``t_1..t_r``, Y positions the rest."""
    xs = [k + 1 for k, c in enumerate(word) if c == "X"]
    ys = [k + 1 for k, c in enumerate(word) if c == "Y"]
    return tuple(xs + ys)


def grassmann_restriction_matrix(r, s, metric="apolar"):
    basis = grassmann_invariant_basis(r, s, metric)
    rows = [[restrict_harmonic(h, coset_representative(word)) for h in basis]
            for word in sg.interleavings(r, s)]
    return PolyMatrix(rows), [h.cohomological_degree for h in basis]


def coset_constancy(r, s, metric="apolar"):
    """True when every invariant harmonic restricts equally on each whole coset."""
    basis = grassmann_invariant_basis(r, s, metric)
    n = r + s
    for word in sg.interleavings(r, s):
        w0 = coset_representative(word)
        for a in permutations(range(r)):
            for b in permutations(range(r, n)):
                w = tuple(w0[k] for k in a + b)
                for h in basis:
                    if restrict_harmonic(h, w) != restrict_harmonic(h, w0):
                        return False
    return True
