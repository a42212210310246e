"""Floating-point construction of the map from point configurations in R³ to flags in Cⁿ.

Each ordered pair of points gives a direction on S² = CP¹.  Point i gets the
binary form of degree n-1 whose roots are the directions towards the other
points; the n forms, written in SU(2)-unitary coordinates and normalized,
are orthonormalized by the polar decomposition.

Coordinates: index k stands for ``X^k Y^(n-1-k) / sqrt(C(n-1, k))``, which
carries principal weight ``μ_{k+1} = n - 1 - 2k``.
"""

from dataclasses import dataclass, field
from itertools import permutations
from math import comb

import mpmath
import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (AmbiguousMatch, CoincidentPoints, CrossClusterCollision,
                     DependentPolynomials, NonConvergentLimit, SizeMismatch)

COLLISION_TOL = 1e-12
INDEPENDENCE_TOL = 1e-12
MATCH_THRESHOLD = 0.99

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class PointConfig:
    points: np.ndarray
    min_separation: float

    @classmethod
    def from_points(cls, points, tol=COLLISION_TOL):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 1:
            raise SizeMismatch("points must be an (n, 3) array with n >= 1")
        n = len(pts)
        sep = np.inf
        for i in range(n):
            for j in range(i + 1, n):
                d = np.linalg.norm(pts[i] - pts[j])
                if d <= tol:
                    raise CoincidentPoints(f"points {i + 1} and {j + 1} coincide")
                sep = min(sep, d)
        return cls(pts, float(sep))

    @property
    def n(self):
        return len(self.points)


@dataclass(frozen=True)
class FlagNumeric:
    lines: np.ndarray
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SubspacePair:
    P: np.ndarray
    Q: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def _as_config(cfg):
    return cfg if isinstance(cfg, PointConfig) else PointConfig.from_points(cfg)


def root_of_direction(d):
    """Unit spinor with Bloch vector ``d`` (``ψᴴ σ ψ = d``)."""
    x, y, z = d
    if z >= 0:
        v = np.array([1 + z, x + 1j * y])
    else:
        v = np.array([x - 1j * y, 1 - z])
    return v / np.linalg.norm(v)


def direction_root(xi, xj):
    """Spinor of the unit direction from ``xi`` to ``xj``."""
    d = np.asarray(xj, dtype=float) - np.asarray(xi, dtype=float)
    norm = np.linalg.norm(d)
    if norm <= COLLISION_TOL:
        raise CoincidentPoints("direction between coincident points")
    return root_of_direction(d / norm)


def _unitary_scale(n):
    return np.array([1 / np.sqrt(comb(n - 1, k)) for k in range(n)])


def binary_form(roots, n):
    """Unitary coordinates of ``∏ (b X - a Y)`` over roots ``(a, b)``."""
    coeffs = np.array([1.0 + 0j])
    for a, b in roots:
        coeffs = np.convolve(coeffs, np.array([-a, b]))
    return coeffs * _unitary_scale(n)


def form_matrix(cfg):
    """Rows are the unit-normalized forms ``p_i``."""
    cfg = _as_config(cfg)
    pts, n = cfg.points, cfg.n
    rows = []
    for i in range(n):
        roots = [direction_root(pts[i], pts[j]) for j in range(n) if j != i]
        p = binary_form(roots, n)
        rows.append(p / np.linalg.norm(p))
    return np.array(rows)


def polar(M):
    """``(M Mᴴ)^(-1/2) M`` via a Hermitian eigendecomposition."""
    w, V = np.linalg.eigh(M @ M.conj().T)
    return (V * (1 / np.sqrt(w))) @ V.conj().T @ M


def point_flag(cfg, tol=INDEPENDENCE_TOL):
    cfg = _as_config(cfg)
    M = form_matrix(cfg)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] < tol:
        raise DependentPolynomials("the forms p_i are numerically dependent",
                                   cfg.points.tolist(), float(s[-1]))
    U = polar(M)
    residual = np.linalg.norm(U @ U.conj().T - np.eye(cfg.n), 2)
    return FlagNumeric(U, {
        "condition_number": float(s[0] / s[-1]),
        "smallest_singular_value": float(s[-1]),
        "polar_residual": float(residual),
    })


# -- rotations ------------------------------------------------------------


def rotation_lift(R):
    """An SU(2) element ``g`` with ``g σ_k gᴴ = Σ_l R_lk σ_l``."""
    x, y, z, w = Rotation.from_matrix(R).as_quat()
    return w * np.eye(2) - 1j * (x * _PAULI[0] + y * _PAULI[1] + z * _PAULI[2])


def lift_residual(g, R):
    return max(np.abs(g @ _PAULI[k] @ g.conj().T - sum(R[l, k] * _PAULI[l] for l in range(3))).max()
               for k in range(3))


def sym_power(g, n):
    """Matrix of ``p ↦ p ∘ g⁻¹`` on degree-(n-1) forms in unitary coordinates."""
    gi = np.linalg.inv(g)
    # (X, Y) ↦ gi (X, Y): X' = gi00 X + gi01 Y, Y' = gi10 X + gi11 Y
    xp = np.array([gi[0, 1], gi[0, 0]])
    yp = np.array([gi[1, 1], gi[1, 0]])
    scale = _unitary_scale(n)
    S = np.zeros((n, n), dtype=complex)
    for k in range(n):
        poly = np.array([1.0 + 0j])
        for _ in range(k):
            poly = np.convolve(poly, xp)
        for _ in range(n - 1 - k):
            poly = np.convolve(poly, yp)
        S[:, k] = poly * scale / scale[k]
    return S


def line_distance(A, B):
    """Largest ``sin`` of the angle between corresponding rows (lines)."""
    out = 0.0
    for a, b in zip(A, B):
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        out = max(out, float(np.linalg.norm(b - a * np.vdot(a, b))))
    return out


def subspace_distance(A, B):
    """Spectral distance of the orthogonal projectors onto the row spans."""
    return float(np.linalg.norm(_projector(A) - _projector(B), 2))


def _orthonormal_rows(A):
    q, _ = np.linalg.qr(np.asarray(A).T)
    return q.T


def _projector(A):
    Q = _orthonormal_rows(A)
    return Q.conj().T @ Q


def rotation_equivariance_residual(cfg, R):
    """Distance between ``f(R·cfg)`` and ``Sym(g)·f(cfg)``, compared line by line."""
    cfg = _as_config(cfg)
    R = np.asarray(R, dtype=float)
    g = rotation_lift(R)
    S = sym_power(g, cfg.n)
    moved = point_flag(cfg.points @ R.T).lines
    transported = point_flag(cfg).lines @ S.T
    return line_distance(moved, transported)


def permutation_residual(cfg, perm):
    """Relabel points by ``perm`` (0-based) and compare with the permuted rows."""
    cfg = _as_config(cfg)
    perm = list(perm)
    a = point_flag(cfg.points[perm]).lines
    b = point_flag(cfg).lines[perm]
    return line_distance(a, b)


# -- two-cluster degeneration ----------------------------------------------


def _mp_forms(points, n):
    scale = [1 / mpmath.sqrt(comb(n - 1, k)) for k in range(n)]
    rows = []
    for i in range(n):
        coeffs = [mpmath.mpc(1)]
        for j in range(n):
            if j == i:
                continue
            d = [points[j][c] - points[i][c] for c in range(3)]
            norm = mpmath.sqrt(sum(x * x for x in d))
            x, y, z = (c / norm for c in d)
            if z >= 0:
                a, b = 1 + z, mpmath.mpc(x, y)
            else:
                a, b = mpmath.mpc(x, -y), 1 - z
            new = [mpmath.mpc(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k] += -a * c
                new[k + 1] += b * c
            coeffs = new
        rows.append([c * s for c, s in zip(coeffs, scale)])
    return rows


def _mp_span(rows, n):
    """Orthonormal basis (float) of the span of high-precision rows, by Gram-Schmidt."""
    basis = []
    for r in rows:
        v = list(r)
        for _ in range(2):
            for b in basis:
                c = sum(mpmath.conj(bk) * vk for bk, vk in zip(b, v))
                v = [vk - c * bk for vk, bk in zip(v, b)]
        norm = mpmath.sqrt(sum(abs(x) ** 2 for x in v))
        basis.append([x / norm for x in v])
    return np.array([[complex(x) for x in b] for b in basis])


def _groups(points, tol):
    groups = []
    for k, p in enumerate(points):
        for g in groups:
            if np.linalg.norm(points[g[0]] - p) <= tol:
                g.append(k)
                break
        else:
            groups.append([k])
    return groups


_APPROACH = np.array([0.5773502691896258, 0.2672612419124244, 0.7715167498104595])


def grassmann_map(x_cluster, y_cluster, delta0=1e-3, max_steps=60, tol=1e-11,
                  dps=60, approach=_APPROACH):
    """Spans ``P`` of the x-cluster forms and ``Q`` of the y-cluster forms.

    Coincident points inside a cluster are separated along ``approach`` by
    ``δ_k = δ₀ 2^-k`` (the j-th copy moved by ``j δ_k``) and the spans are
    followed until successive iterates agree to ``tol``.
    """
    X = np.asarray(x_cluster, dtype=float).reshape(-1, 3)
    Y = np.asarray(y_cluster, dtype=float).reshape(-1, 3)
    r, s = len(X), len(Y)
    n = r + s
    for i, x in enumerate(X):
        for j, y in enumerate(Y):
            if np.linalg.norm(x - y) <= COLLISION_TOL:
                raise CrossClusterCollision(f"x_{i + 1} coincides with y_{j + 1}")
    pts = np.vstack([X, Y]) if r and s else (X if r else Y)
    groups = [g for g in _groups(pts, COLLISION_TOL) if len(g) > 1]
    direction = np.asarray(approach, dtype=float)
    direction = direction / np.linalg.norm(direction)

    with mpmath.workdps(dps):
        def spans(delta):
            moved = [[mpmath.mpf(float(c)) for c in p] for p in pts]
            for g in groups:
                for j, k in enumerate(g[1:], 1):
                    for c in range(3):
                        moved[k][c] += j * delta * mpmath.mpf(float(direction[c]))
            rows = _mp_forms(moved, n)
            return _mp_span(rows[:r], n), _mp_span(rows[r:], n)

        if not groups:
            P, Q = spans(0)
            return SubspacePair(P, Q, {"limit_steps": 0})
        history = []
        prev = spans(mpmath.mpf(delta0))
        for k in range(1, max_steps + 1):
            cur = spans(mpmath.mpf(delta0) / 2 ** k)
            diff = max(subspace_distance(prev[0], cur[0]) if r else 0.0,
                       subspace_distance(prev[1], cur[1]) if s else 0.0)
            history.append(diff)
            if diff < tol:
                rate = history[-1] / history[-2] if len(history) > 1 and history[-2] else None
                return SubspacePair(cur[0], cur[1], {
                    "limit_steps": k, "cauchy_history": history, "rate": rate})
            prev = cur
    raise NonConvergentLimit(f"spans not Cauchy after {max_steps} halvings",
                             {"cauchy_history": history})


def grassmann_point(pair):
    """Orthogonal splitting of ``Cⁿ`` closest to the pair ``(P, Q)``: polar of the stacked bases."""
    M = np.vstack([pair.P, pair.Q]) if len(pair.P) and len(pair.Q) else (
        pair.P if len(pair.P) else pair.Q)
    U = polar(M)
    r = len(pair.P)
    return U[:r], U[r:]


def diagram_residual(cfg, r):
    """Compare the flag's (first r lines, last s lines) with the two-cluster point."""
    cfg = _as_config(cfg)
    flag = point_flag(cfg).lines
    pair = grassmann_map(cfg.points[:r], cfg.points[r:])
    P, Q = grassmann_point(pair)
    post = max(subspace_distance(flag[:r], P), subspace_distance(flag[r:], Q))
    forms = form_matrix(cfg)
    pre = max(subspace_distance(forms[:r], pair.P), subspace_distance(forms[r:], pair.Q))
    return {"polar": post, "pre_polar": pre}


def collision_span_check(x1, x2_direction, others, delta0=1e-3):
    """Limit span of ``p_1, p_2`` as ``x_2 → x_1`` versus the two-point characterization.

    The characterization: forms of degree n-1 vanishing at the directions from
    ``x_1`` to every other point.  Returns the principal-angle distance.
    """
    others = np.asarray(others, dtype=float).reshape(-1, 3)
    x1 = np.asarray(x1, dtype=float)
    pair = grassmann_map(np.vstack([x1, x1]), others, delta0=delta0,
                         approach=np.asarray(x2_direction, dtype=float))
    n = 2 + len(others)
    fixed = [direction_root(x1, y) for y in others]
    base = binary_form(fixed, n - 1) / _unitary_scale(n - 1)
    expected = []
    for lin in (np.array([1, 0]), np.array([0, 1])):
        expected.append(np.convolve(base, lin) * _unitary_scale(n))
    return subspace_distance(pair.P, np.array(expected)), pair


# -- calibration ------------------------------------------------------------


def on_axis_config(tau):
    """Point ``tau[k]`` placed at height ``k`` on the z-axis."""
    n = len(tau)
    pts = np.zeros((n, 3))
    for k, label in enumerate(tau):
        pts[label - 1, 2] = float(k)
    return pts


def calibrate_fixed_labels(n, threshold=MATCH_THRESHOLD):
    """Map each component label τ to the fixed flag w hit by the on-axis configuration.

    Line i of the output is matched to the coordinate line it overlaps with;
    that coordinate has weight ``μ_{k+1}``, so ``w(i) = k + 1``.
    """
    table, overlaps = {}, {}
    for tau in permutations(range(1, n + 1)):
        lines = point_flag(on_axis_config(tau)).lines
        w = []
        worst = 1.0
        for i, row in enumerate(lines):
            mags = np.abs(row)
            k = int(np.argmax(mags))
            if mags[k] < threshold:
                raise AmbiguousMatch(f"line {i + 1} for ordering {tau} has overlap {mags[k]:.3f}")
            worst = min(worst, float(mags[k]))
            w.append(k + 1)
        if sorted(w) != list(range(1, n + 1)):
            raise AmbiguousMatch(f"ordering {tau} does not give a fixed flag: {w}")
        table[tau] = tuple(w)
        overlaps[tau] = worst
    if len(set(table.values())) != len(table):
        raise AmbiguousMatch("calibration table is not a bijection")
    return table, overlaps
