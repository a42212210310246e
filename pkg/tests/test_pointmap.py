import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from confflag import pointmap
from confflag import symgroup as sg
from confflag.errors import CoincidentPoints, CrossClusterCollision

PAULI = pointmap._PAULI

seeds = st.integers(0, 2 ** 32 - 1)


def random_config(seed, n):
    return np.random.default_rng(seed).normal(size=(n, 3))


def bloch(v):
    return np.real([np.vdot(v, P @ v) for P in PAULI])


def test_root_of_direction_examples():
    assert np.allclose(pointmap.root_of_direction([0, 0, 1]), [1, 0])
    assert np.allclose(pointmap.root_of_direction([0, 0, -1]), [0, 1])
    a, b = pointmap.root_of_direction([1, 0, 0]), pointmap.root_of_direction([-1, 0, 0])
    assert np.isclose(abs(a[0]), abs(a[1])) and abs(np.vdot(a, b)) < 1e-15


@given(st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_root_has_bloch_vector(v):
    d = np.array(v) / np.linalg.norm(v)
    r = pointmap.root_of_direction(d)
    assert np.allclose(bloch(r), d, atol=1e-12)
    assert abs(np.vdot(r, pointmap.root_of_direction(-d))) < 1e-12


@given(seeds)
def test_n2_rows_vanish_on_opposite_directions(seed):
    pts = random_config(seed, 2)
    res = pointmap.point_flag(pts)
    U = res.lines
    assert res.diagnostics["polar_residual"] < 1e-14
    d = (pts[1] - pts[0]) / np.linalg.norm(pts[1] - pts[0])
    # row k is c0 Y + c1 X; row 1 vanishes at the spinor of d, row 2 at that of -d
    for row, direction in ((U[0], d), (U[1], -d)):
        a, b = pointmap.root_of_direction(direction)
        assert abs(row[0] * b + row[1] * a) < 1e-12
    # the forms were orthogonal before the polar step, so it changes nothing
    assert pointmap.line_distance(U, pointmap.form_matrix(pts)) < 1e-12


def test_collinear_gives_coordinate_lines():
    for tau in sg.all_permutations(3):
        U = pointmap.point_flag(pointmap.on_axis_config(tau)).lines
        assert np.allclose(np.abs(U) ** 2 @ np.ones(3), 1)
        assert np.allclose(np.sort(np.abs(U).max(axis=1)), 1)


def test_binary_form_roots():
    rng = np.random.default_rng(3)
    roots = [pointmap.root_of_direction(v / np.linalg.norm(v)) for v in rng.normal(size=(3, 3))]
    coeffs = pointmap.binary_form(roots, 4) / pointmap._unitary_scale(4)
    for a, b in roots:
        # p(X, Y) = Σ c_k X^k Y^(3-k) vanishes at (X, Y) = (a, b)
        assert abs(sum(c * a ** k * b ** (3 - k) for k, c in enumerate(coeffs))) < 1e-12


@given(seeds)
def test_rotation_lift(seed):
    R = Rotation.random(random_state=seed).as_matrix()
    g = pointmap.rotation_lift(R)
    assert pointmap.lift_residual(g, R) < 1e-12
    assert np.allclose(g @ g.conj().T, np.eye(2)) and np.isclose(np.linalg.det(g), 1)


def test_sym_power_is_unitary_homomorphism():
    rng = np.random.default_rng(5)
    for n in range(2, 6):
        g1 = pointmap.rotation_lift(Rotation.random(random_state=rng).as_matrix())
        g2 = pointmap.rotation_lift(Rotation.random(random_state=rng).as_matrix())
        S1, S2 = pointmap.sym_power(g1, n), pointmap.sym_power(g2, n)
        assert np.allclose(S1 @ S1.conj().T, np.eye(n), atol=1e-12)
        assert np.allclose(pointmap.sym_power(g1 @ g2, n), S1 @ S2, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 5))
def test_numeric_equivariance(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    R = Rotation.random(random_state=rng).as_matrix()
    assert pointmap.rotation_equivariance_residual(pts, R) <= 1e-8
    assert pointmap.permutation_residual(pts, rng.permutation(n)) <= 1e-8
    assert pointmap.point_flag(pts).diagnostics["polar_residual"] <= 1e-12


def test_identity_rotation_residual_is_zero():
    pts = random_config(1, 4)
    assert pointmap.rotation_equivariance_residual(pts, np.eye(3)) < 1e-14


def test_errors():
    with pytest.raises(CoincidentPoints):
        pointmap.point_flag([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    with pytest.raises(CrossClusterCollision):
        pointmap.grassmann_map([[0, 0, 0]], [[0, 0, 0], [1, 0, 0]])


def test_grassmann_r1_is_single_form():
    pts = random_config(11, 4)
    pair = pointmap.grassmann_map(pts[:1], pts[1:])
    forms = pointmap.form_matrix(pts)
    assert pointmap.subspace_distance(pair.P, forms[:1]) < 1e-12
    assert pointmap.subspace_distance(pair.Q, forms[1:]) < 1e-12


def test_collision_span_limit():
    rng = np.random.default_rng(2)
    for _ in range(3):
        others = rng.normal(size=(2, 3))
        dist, pair = pointmap.collision_span_check(np.zeros(3), rng.normal(size=3), others)
        assert dist < 1e-8
        assert pair.diagnostics["limit_steps"] > 0


def test_raw_spans_commute_with_degeneration():
    rng = np.random.default_rng(4)
    for n in (3, 4, 5):
        pts = rng.normal(size=(n, 3))
        assert pointmap.diagram_residual(pts, int(rng.integers(1, n)))["pre_polar"] < 1e-8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_calibration_is_inverse_bijection(n):
    table, overlaps = pointmap.calibrate_fixed_labels(n)
    assert len(set(table.values())) == len(table) == len(sg.all_permutations(n))
    assert all(w == sg.inverse(tau) for tau, w in table.items())
    assert min(overlaps.values()) >= pointmap.MATCH_THRESHOLD


def test_calibration_transports_under_relabeling():
    table, _ = pointmap.calibrate_fixed_labels(4)
    for sigma in sg.all_permutations(4):
        for tau in sg.all_permutations(4):
            # relabeling point k as sigma(k) sends the ordering tau to sigma∘tau
            assert table[sg.compose(sigma, tau)] == sg.compose(table[tau], sg.inverse(sigma))
