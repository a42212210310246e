from fractions import Fraction

import numpy as np
import pytest

from confflag import conf, flag, ktheory, matching, series
from confflag import symgroup as sg
from confflag.conventions import Conventions
from confflag.errors import EquivarianceFailure, Falsification
from confflag.matrix import PolyMatrix, det_rational
from confflag.poly import LaurentPoly, RatPoly, cyclotomic_poly

tp = RatPoly.x()
q = LaurentPoly.monomial(1, 1)
qi = LaurentPoly.monomial(1, -1)


# -- cohomological matching ---------------------------------------------------------


def test_n2_is_diag_1_2():
    M = matching.compute_matching_matrix(2)
    assert M.A == PolyMatrix([[RatPoly.one(), RatPoly.zero()], [RatPoly.zero(), RatPoly.constant(2)]])
    assert matching.cokernel_report(M).series == []


def test_n3_structure():
    M = matching.compute_matching_matrix(3)
    assert M.det_degree == 2 and M.det.is_monomial() and M.det.degree == 2
    rep = matching.cokernel_report(M)
    assert rep.exponents == (0, 0, 0, 0, 0, 1)
    assert rep.series == [0, 0, 1]
    assert rep.smith.reconstructs(M.in_u())
    assert matching.rank_Ak(M, 0) == 5
    assert matching.rank_Ak(M, 1) == 1
    blocks = matching.extract_Ak(M, 1)
    nonzero = [d for d, (_, B) in blocks.items() if any(any(r) for r in B)]
    assert nonzero == [6] and blocks[6][0] == 2
    assert matching.rank_Ak(M, 2) == 0


def test_A0_preserves_degree():
    M = matching.compute_matching_matrix(3)
    C = M.coefficient(0)
    for i, rd in enumerate(M.row_degrees):
        for j, cd in enumerate(M.col_degrees):
            if C[i][j]:
                assert rd == cd
    assert C[0][0] == 1


@pytest.mark.parametrize("metric", ["apolar", "monomial"])
def test_n4_cokernel_is_psi(metric):
    M = matching.compute_matching_matrix(4, Conventions(metric=metric))
    rep = matching.cokernel_report(M)
    assert rep.series == series.in_t(series.phi_psi(4)[1])
    assert rep.smith.reconstructs(M.in_u())


def test_metrics_agree_on_invariants():
    for n in (3, 4):
        a = matching.compute_matching_matrix(n, Conventions(metric="apolar"))
        b = matching.compute_matching_matrix(n, Conventions(metric="monomial"))
        assert a.det.degree == b.det.degree
        assert matching.cokernel_report(a).exponents == matching.cokernel_report(b).exponents


def test_det_matches_restriction_determinants():
    # det A = det R_F(paired) / det R_X, computed independently of the solve
    n = 3
    RX, _ = conf.conf_restriction_matrix(n)
    RF, _ = flag.flag_restriction_matrix(n)
    RF = RF.permute_rows(matching.row_pairing(n))
    M = matching.compute_matching_matrix(n)
    assert RX.det() * M.det == RF.det()


def test_identity_labels_are_falsified():
    with pytest.raises(Falsification):
        matching.compute_matching_matrix(3, Conventions(labels="identity"))


def test_inverse_labels_equal_calibrated():
    a = matching.compute_matching_matrix(4)
    b = matching.compute_matching_matrix(4, Conventions(labels="inverse"))
    assert a.A == b.A


@pytest.mark.parametrize("n", [2, 3, 4])
def test_equivariance_full_group(n):
    rep = matching.equivariance_audit(n)
    assert rep["passed"] and len(rep["checked"]) == len(sg.all_permutations(n))


def test_product_lift_breaks_graded_equivariance():
    conv = Conventions(conf_lift="product")
    M = matching.compute_matching_matrix(3, conv)
    assert matching.cokernel_report(M).series == [0, 0, 1]
    with pytest.raises(EquivarianceFailure) as err:
        matching.equivariance_audit(3, conv)
    assert err.value.witness["check"].startswith("A_")


def test_character_tables():
    t2 = matching.graded_character_table(2, "conf")
    assert t2[0] == {(2,): 1, (1, 1): 0} and t2[2] == {(2,): 0, (1, 1): 1}
    f3 = matching.graded_character_table(3, "flag")
    assert f3[6] == {(3,): 0, (2, 1): 0, (1, 1, 1): 1}
    for n in (3, 4):
        for side in ("conf", "flag"):
            totals = matching.total_multiplicities(matching.graded_character_table(n, side))
            assert matching.is_regular(n, totals)


@pytest.mark.parametrize("n", [3, 4])
def test_cokernel_character_dimension_is_psi(n):
    coker = matching.cokernel_character(n)
    psi = series.in_t(series.phi_psi(n)[1])
    size = max(len(v) for v in coker.values())
    dims = [sum(sg.dimension(lam) * (v[d] if d < len(v) else 0) for lam, v in coker.items())
            for d in range(size)]
    assert all(c >= 0 for v in coker.values() for c in v)
    assert dims == psi


@pytest.mark.parametrize("n", range(2, 7))
def test_r1_matching_is_isomorphism(n):
    M = matching.r1_matching_matrix(n)
    assert M.det and M.det.degree == 0
    # conf side is a Vandermonde matrix in the values n-1-2k
    RX, _ = matching.conf_r1_restriction_matrix(n)
    vals = [n - 1 - 2 * k for k in range(n)]
    vdm = 1
    for i in range(n):
        for j in range(i + 1, n):
            vdm *= vals[j] - vals[i]
    consts = [[e.lc if e else Fraction(0) for e in r] for r in RX.entries]
    assert det_rational(consts) == vdm


# -- K-theory ------------------------------------------------------------------------


def test_K_restriction_examples():
    assert ktheory.flag_K_restriction((0, 0), (2, 1)) == LaurentPoly.one()
    assert ktheory.flag_K_restriction((1, 0), (1, 2)) == q
    assert ktheory.flag_K_restriction((1, 0), (2, 1)) == qi
    assert ktheory.flag_K_restriction((2, 1, 0), (1, 2, 3)) == q ** 4
    assert ktheory.conf_K_restriction((), (1, 2)) == LaurentPoly.one()
    assert ktheory.conf_K_restriction(((1, 2),), (1, 2)) == q
    assert ktheory.conf_K_restriction(((1, 2),), (2, 1)) == qi
    assert ktheory.conf_K_restriction(((1, 2), (1, 3)), (1, 2, 3)) == q * q


def test_steinberg_count():
    for n in range(1, 6):
        assert len(ktheory.steinberg_monomials(n)) == len(sg.all_permutations(n))


def test_K_n2_identity():
    K = ktheory.compute_K_matching(2)
    assert K.laurent and K.A == PolyMatrix.identity(2, kind=LaurentPoly)
    assert K.det_flag == qi - q
    assert K.det_conf == K.det_flag and K.ratio["indices"] == []


@pytest.mark.parametrize("n", [3, 4])
def test_K_matching(n):
    K = ktheory.compute_K_matching(n)
    assert K.A.det()
    assert K.ratio["cyclotomic"] and K.indices_within["spin_units"]
    assert ktheory.q_inversion_symmetric(K)
    # oracle: evaluate at q = 2 and solve numerically
    x = Fraction(2)
    RX = np.array([[float(e(x)) for e in r] for r in ktheory.conf_K_matrix(n).entries])
    RF = ktheory.flag_K_matrix(n).permute_rows(matching.row_pairing(n, "inverse"))
    RF = np.array([[float(e(x)) for e in r] for r in RF.entries])
    A = np.array([[float(e(x)) for e in r] for r in K.A.entries])
    assert np.allclose(RX @ A, RF, rtol=1e-9, atol=1e-9)


def test_K_ratio_reexpands():
    for n in (3, 4):
        K = ktheory.compute_K_matching(n)
        ratio = K.ratio
        coeff, shift = Fraction(ratio["unit"][0]), ratio["unit"][1]
        num, den = RatPoly.one(), RatPoly.one()
        for d, m in ratio["factors"].items():
            if m > 0:
                num = num * cyclotomic_poly(int(d)) ** m
            else:
                den = den * cyclotomic_poly(int(d)) ** (-m)
        lhs = K.det_flag * LaurentPoly.from_ratpoly(den)
        rhs = K.det_conf * LaurentPoly.from_ratpoly(num) * LaurentPoly.monomial(coeff, shift)
        assert lhs == rhs


def test_first_order_recovers_cohomology():
    assert ktheory.first_order_check_n2() == [[1, 0], [0, 2]]


def test_freeness_probe():
    for n in (2, 3, 4):
        probe = ktheory.freeness_probe_K(n)
        assert probe["det_conf_nonzero"] and probe["det_flag_nonzero"]
