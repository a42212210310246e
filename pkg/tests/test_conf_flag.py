import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from confflag import conf, flag, series
from confflag import symgroup as sg
from confflag.errors import SizeLimit
from confflag.matrix import PolyMatrix, fraction_solve, matmul_rational
from confflag.mpoly import MPoly
from confflag.poly import RatPoly

tp = RatPoly.x()


def census(degrees):
    out = [0] * (max(degrees) // 2 + 1)
    for d in degrees:
        out[d // 2] += 1
    return out


# -- configuration side --------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_admissible_census(n):
    basis = conf.admissible_basis(n)
    assert census([conf.degree(b) for b in basis]) == series.poincare_conf(n)
    for b in basis:
        seconds = [j for _, j in b]
        assert seconds == sorted(set(seconds))


def test_admissible_small():
    assert conf.admissible_basis(2) == [(), ((1, 2),)]
    assert len(conf.admissible_basis(4)) == 24


def test_epsilon_and_restriction_examples():
    assert conf.epsilon((1, 2, 3), 1, 2) == 1
    assert conf.epsilon((1, 2, 3), 2, 1) == -1
    assert conf.epsilon((2, 1, 3), 1, 2) == -1
    assert conf.restrict_monomial((), (2, 1)) == RatPoly.one()
    assert conf.restrict_monomial(((1, 2),), (1, 2)) == tp
    assert conf.restrict_monomial(((1, 2),), (2, 1)) == -tp
    assert conf.restrict_monomial(((1, 2), (1, 3)), (1, 2, 3)) == tp * tp


@pytest.mark.parametrize("lift", ["orthogonal", "product"])
def test_conf_restriction_determinants(lift):
    R, _ = conf.conf_restriction_matrix(1, lift)
    assert R == PolyMatrix([[RatPoly.one()]])
    R, _ = conf.conf_restriction_matrix(2, lift)
    assert R == PolyMatrix([[RatPoly.one(), tp], [RatPoly.one(), -tp]])
    assert R.det() == RatPoly.monomial(-2, 1)
    d = conf.conf_restriction_matrix(3, lift)[0].det()
    assert d.is_monomial() and d.degree == 7


def product_lift_coordinates(mono, n):
    """Classical coordinates of ``mono`` read off from a product-lift localisation solve."""
    R, _ = conf.conf_restriction_matrix(n, "product")
    col = PolyMatrix([[conf.restrict_monomial(mono, tau)] for tau in sg.all_permutations(n)])
    X = fraction_solve(R, col).to_polynomial()
    basis = conf.admissible_basis(n)
    return {b: X[i, 0].coeff(0) for i, b in enumerate(basis) if len(b) == len(mono) and X[i, 0]}


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_normal_form_matches_localisation(data):
    n = data.draw(st.integers(3, 4))
    k = data.draw(st.integers(1, n - 1))
    mono = tuple(sorted(data.draw(st.lists(st.sampled_from(conf.pairs(n)), min_size=k,
                                           max_size=k, unique=True))))
    expected = {b: Fraction(v) for b, v in conf.normal_form(mono).items()}
    assert product_lift_coordinates(mono, n) == expected


def test_normal_form_fixes_admissible():
    for b in conf.admissible_basis(4):
        if b:
            assert conf.normal_form(b) == {b: 1}


def test_relation_probe():
    for n in (3, 4):
        rep = conf.equivariant_relation_probe(n)
        assert rep["square"]["passed"] and rep["three_term"]["passed"]


@pytest.mark.parametrize("n", [3, 4])
def test_conf_action_is_polynomial_representation(n):
    perms = sg.all_permutations(n)
    size = len(perms)
    assert conf.conf_action_matrix(sg.identity(n), n) == PolyMatrix.identity(size)
    gens = sg.adjacent_transpositions(n)
    mats = {s: conf.conf_action_matrix(s, n) for s in gens}
    for a, b in itertools.product(gens, repeat=2):
        assert mats[a] @ mats[b] == conf.conf_action_matrix(sg.compose(a, b), n)


def test_ordinary_action_is_representation():
    n = 4
    perms = sg.all_permutations(n)
    for a, b in [(perms[3], perms[10]), (perms[7], perms[19])]:
        A, B = conf.ordinary_action_matrix(a, n), conf.ordinary_action_matrix(b, n)
        assert matmul_rational(A, B) == conf.ordinary_action_matrix(sg.compose(a, b), n)


# -- flag side --------------------------------------------------------------------


@pytest.mark.parametrize("metric", ["apolar", "monomial"])
@pytest.mark.parametrize("n", range(1, 6))
def test_harmonic_census_and_harmonicity(n, metric):
    basis = flag.harmonic_basis(n, metric)
    assert census([h.cohomological_degree for h in basis]) == series.poincare_flag(n)
    for h in basis:
        assert flag.is_harmonic(h.poly, metric)


def test_harmonic_n2():
    basis = flag.harmonic_basis(2)
    assert [str(h) for h in basis] == ["1", "t1 - t2"]


def test_monomial_metric_orthogonal_to_ideal():
    # coefficient dot product with e1 * m vanishes for every monomial m of the right degree
    n = 3
    e1 = sum((MPoly.variable(i, n) for i in range(1, n)), MPoly.variable(0, n))
    for h in flag.harmonic_basis(n, "monomial"):
        d = h.degree
        if d == 0:
            continue
        for exps in itertools.product(range(d), repeat=n):
            if sum(exps) != d - 1:
                continue
            g = e1 * MPoly({exps: 1}, n)
            assert sum(c * g.terms.get(e, 0) for e, c in h.poly.terms.items()) == 0


def test_flag_restriction_examples():
    R, _ = flag.flag_restriction_matrix(1)
    assert R == PolyMatrix([[RatPoly.one()]])
    R, _ = flag.flag_restriction_matrix(2)
    assert R == PolyMatrix([[RatPoly.one(), 2 * tp], [RatPoly.one(), -2 * tp]])
    d = flag.flag_restriction_matrix(3)[0].det()
    assert d.is_monomial() and d.degree == 9


def test_flag_action_examples():
    assert flag.flag_action_matrix((2, 1), 2) == [[1, 0], [0, -1]]
    for p in sg.all_permutations(3):
        tr = sum(flag.graded_traces(3, p).values())
        assert tr == (6 if p == (1, 2, 3) else 0)


def restriction_derived_action(sigma, n, metric):
    """Solve ``R_F ρ = P R_F`` where row w of ``P R_F`` is row ``w∘σ`` of ``R_F``."""
    perms = sg.all_permutations(n)
    index = sg.index_of(perms)
    R, _ = flag.flag_restriction_matrix(n, metric)
    target = R.permute_rows([index[sg.compose(w, sigma)] for w in perms])
    return fraction_solve(R, target).to_polynomial()


@pytest.mark.parametrize("metric", ["apolar", "monomial"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_restriction_derived_flag_action(n, metric):
    for sigma in sg.all_permutations(n):
        direct = PolyMatrix.from_constants(flag.flag_action_matrix(sigma, n, metric))
        assert restriction_derived_action(sigma, n, metric) == direct


def test_grassmann_invariants():
    assert [str(h) for h in flag.grassmann_invariant_basis(0, 3)] == ["1"]
    b = flag.grassmann_invariant_basis(1, 2)
    assert census([h.cohomological_degree for h in b]) == [1, 1, 1]
    b = flag.grassmann_invariant_basis(2, 2)
    assert census([h.cohomological_degree for h in b]) == [1, 1, 2, 1, 1]
    for r, s in [(1, 2), (2, 2), (1, 3), (2, 3)]:
        basis = flag.grassmann_invariant_basis(r, s)
        assert census([h.cohomological_degree for h in basis]) == series.poincare_grassmann(r, s)
        block = list(range(1, r + 1)), list(range(r + 1, r + s + 1))
        for h in basis:
            for a in itertools.permutations(block[0]):
                for c in itertools.permutations(block[1]):
                    assert h.poly.permute_variables(a + c) == h.poly
        assert flag.coset_constancy(r, s)


def test_size_limits():
    with pytest.raises(SizeLimit):
        flag.harmonic_basis(sg.MAX_N + 1)
    with pytest.raises(SizeLimit):
        conf.admissible_basis(sg.MAX_N + 1)
