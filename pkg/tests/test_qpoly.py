from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtroesch.coeff import FieldSpec, get_field
from qtroesch.errors import DomainError
from qtroesch.line import build_B1
from qtroesch.linalg import axpy
from qtroesch.ncomplex import check_nilpotency
from qtroesch.qpoly import (
    RELATIONS,
    Convention,
    b_basis,
    braiding,
    braiding_matrix,
    build_B_direct,
    calibrate,
    calibrated_convention,
    coproduct,
    exponential_iso,
    get_algebra,
    monomials,
    mu_B,
    mu_B_failures,
    phi_kernel,
    product,
    verify_relations,
    weight_decompose,
    weight_of,
)

F = get_field(FieldSpec("cyclotomic", 3))
CONV = calibrated_convention(F)
PERTURBED = Convention((CONV.c1 + 1) % 3, CONV.c2, CONV.cross)


def mono(n, max_deg=3):
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(tuple)


def test_calibration_outcome():
    res = calibrate(F)
    assert res.chosen == Convention(1, 1, "hecke_gt") and res.chosen.calibrated
    assert res.passers == [Convention(1, 1, "hecke_gt"), Convention(2, 1, "hecke_lt")]
    assert CONV.calibrated


def test_convention_validation_and_descriptor():
    with pytest.raises(DomainError):
        Convention(1, 1, "twisted")
    assert CONV.descriptor() == "c1=1,c2=1,cross=hecke_gt"
    assert Convention(0, 2, "diag", 1, 2).to_json() == {"c1": 0, "c2": 2, "cross": "diag", "u": 1, "v": 2}


def test_product_examples():
    assert product((2,), (3,), CONV) == (F.one, (5,))
    assert product((0, 1), (1, 0), CONV) == (F.qpow(CONV.c1), (1, 1))
    assert product((0, 0), (2, 1), CONV) == (F.one, (2, 1))


def test_coproduct_examples():
    assert coproduct(0, 3, (1, 2), CONV) == {((0, 0), (1, 2)): F.one}
    for k in range(1, 8):
        got = coproduct(k - 1, 1, (k,), CONV)
        t = F.qpow(2)
        coef = F.zero
        for j in range(k):
            coef = F.add(coef, F.pow(t, j))
        assert got == ({} if F.is_zero(coef) else {((k - 1,), (1,)): coef})
    # (x1|1 + 1|x1)(x2|1 + 1|x2), cross term (1|x1)(x2|1) = q R(x1|x2) = q x2|x1
    assert coproduct(1, 1, (1, 1), CONV) == {((1, 0), (0, 1)): F.one, ((0, 1), (1, 0)): F.q}
    with pytest.raises(DomainError):
        coproduct(1, 1, (1, 0), CONV)


def test_braiding_examples():
    assert braiding((0, 0), (1, 2), CONV) == {((1, 2), (0, 0)): F.one}
    assert braiding((2,), (3,), CONV) == {((3,), (2,)): F.qpow(6 * CONV.c2)}
    assert braiding((1, 0), (0, 1), CONV) == {((0, 1), (1, 0)): F.one}
    corr = F.sub(F.q, F.qpow(-1))
    assert braiding((0, 1), (1, 0), CONV) == {((1, 0), (0, 1)): F.one, ((0, 1), (1, 0)): corr}


@pytest.mark.parametrize("d1,d2,n", [(1, 1, 2), (2, 1, 2), (2, 2, 2), (1, 2, 3), (2, 2, 3)])
def test_braiding_invertible(d1, d2, n):
    R = braiding_matrix(d1, d2, n, CONV)
    assert R.nrows == R.ncols and R.rank(F) == R.ncols


def test_hecke_quadratic_relation():
    # (R - q)(R + q^-1) = 0 on V (x) V
    A = get_algebra(F, 3, CONV)
    gens = monomials(1, 3)
    for x in gens:
        for y in gens:
            v = {(x, y): F.one}
            rv = A.v_R(v, 0)
            rrv = A.v_R(rv, 0)
            out = dict(rrv)
            axpy(F, out, F.sub(F.qpow(-1), F.q), rv)
            axpy(F, out, F.neg(F.one), v)
            assert out == {}


def test_yang_baxter_on_degree_one():
    A = get_algebra(F, 3, CONV)
    gens = monomials(1, 3)
    for x in gens:
        for y in gens:
            for w in gens:
                v = {(x, y, w): F.one}
                assert A.v_R(A.v_R(A.v_R(v, 0), 1), 0) == A.v_R(A.v_R(A.v_R(v, 1), 0), 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_relations_hold_for_calibrated_convention(n):
    rep = verify_relations(n, 4, CONV)
    assert rep.passed, rep.failed()
    assert set(rep.results) == set(RELATIONS)
    assert all(r.checked > 0 for r in rep.results.values())


def test_perturbed_convention_fails_dumbbell_in_degree_one_one():
    rep = verify_relations(2, 3, PERTURBED)
    assert not rep.passed and "dumbbell" in rep.failed()
    A = get_algebra(F, 2, PERTURBED)
    _, fn = RELATIONS["dumbbell"]
    bad = [(x, y) for x in monomials(1, 2) for y in monomials(1, 2) if fn(A, x, y)[0] != fn(A, x, y)[1]]
    assert bad


def test_relation_eight_is_the_degree_one_part_of_seven():
    A = get_algebra(F, 2, CONV)
    _, seven = RELATIONS["dumbbell"]
    _, eight = RELATIONS["dumbbell1"]
    for x in monomials(2, 2):
        for y in monomials(1, 2):
            lhs7, _ = seven(A, x, y)
            lhs8, rhs8 = eight(A, x, y)
            assert lhs8 == {t: c for t, c in lhs7.items() if sum(t[1]) == 1} == rhs8


@settings(max_examples=40, deadline=None)
@given(mono(2), mono(2), mono(2))
def test_structure_maps_preserve_weight(x, y, w):
    A = get_algebra(F, 2, CONV)
    assert A.mul(x, y)[1] == weight_of((x, y))
    assert all(weight_of(t) == weight_of((x, y)) for t in A.braid(x, y))
    assert all(weight_of(t) == x for t in A.coproduct(x))
    assert all(weight_of(t) == weight_of((x, y, w, w, x, y)) for t in mu_B((x, y, w), (w, x, y), CONV))


def test_weight_decompose_examples():
    parts = weight_decompose(monomials(2, 2))
    assert parts == {(0, 2): [(0, 2)], (1, 1): [(1, 1)], (2, 0): [(2, 0)]}
    pairs = [(a, b) for a in monomials(1, 2) for b in monomials(1, 2)]
    assert len(weight_decompose(pairs)[(1, 1)]) == 2
    assert weight_of((1, 2)) == (1, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_phi_kernel_dimension(n, d):
    assert len(phi_kernel(d, n, F, CONV)) == comb(n + d - 1, d)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_phi_kernel_one_variable_is_a_power(d):
    ker = phi_kernel(d, 1, F, CONV)
    assert len(ker) == 1 and list(ker[0]) == [(3 * d,)]


def test_direct_model_in_one_variable_is_the_line_model():
    for d in range(7):
        D, L = build_B_direct(d, 1, CONV, F), build_B1(d, F)
        assert D.graded_dims() == L.graded_dims()
        assert all(D.matrix(i) == L.matrix(i) for i in L.degrees())


def test_direct_model_degree_one_two_variables():
    B = build_B_direct(1, 2, CONV, F)
    assert B.graded_dims() == {0: 2, 1: 2, 2: 2}
    assert B.rank(0, 1) == 2 and B.rank(1, 1) == 2


@pytest.mark.parametrize("n", [1, 2])
def test_direct_model_nilpotent(n):
    for d in range(7):
        assert check_nilpotency(build_B_direct(d, n, CONV, F))


def test_perturbed_convention_breaks_direct_model_somewhere():
    assert not verify_relations(2, 3, PERTURBED).passed
    wrong_c2 = Convention(CONV.c1, 0, CONV.cross)
    broken = [d for d in range(5) if not check_nilpotency(build_B_direct(d, 2, wrong_c2, F, check=False))]
    assert broken == [2, 3, 4]


def test_mu_B_unit_and_line_specialisation():
    unit = ((0, 0), (0, 0), (0, 0))
    for m in b_basis(3, 2)[2]:
        assert mu_B(unit, m, CONV) == {m: F.one} == mu_B(m, unit, CONV)


@settings(max_examples=30, deadline=None)
@given(st.tuples(mono(2, 1), mono(2, 1), mono(2, 1)), st.tuples(mono(2, 1), mono(2, 1), mono(2, 1)), st.tuples(mono(2, 1), mono(2, 1), mono(2, 1)))
def test_mu_B_associative(a, b, c):
    A = get_algebra(F, 2, CONV)
    left = A.mu_B_elements(A.mu_B(a, b), {c: F.one})
    right = A.mu_B_elements({a: F.one}, A.mu_B(b, c))
    assert left == right


@pytest.mark.parametrize("n", [1, 2])
def test_mu_B_commutes_with_differentials(n):
    assert mu_B_failures(n, 4, CONV, F) == []


def test_mu_B_compatibility_fails_for_diagonal_braiding():
    assert mu_B_failures(2, 2, Convention(1, 1, "diag", 1, 2), F, first_only=True)


@pytest.mark.parametrize("d", range(7))
def test_exponential_map_is_an_isomorphism_of_complexes(d):
    f = exponential_iso(d, 2, CONV, F)
    assert f.is_isomorphism()
    assert f.is_chain_map()


def test_exponential_map_small_cases():
    f0 = exponential_iso(0, 2, CONV, F)
    assert f0.image((((0, 0, 0)), ((0, 0, 0))), 0) == {((0, 0), (0, 0), (0, 0)): F.one}
    f1 = exponential_iso(1, 2, CONV, F)
    for i in (0, 1, 2):
        assert f1.matrix(i).nnz() == 2


def test_exponential_map_three_variables():
    for d in range(4):
        f = exponential_iso(d, 3, CONV, F)
        assert f.is_isomorphism() and f.is_chain_map()


def test_prime_field_calibrates_identically():
    P = get_field(FieldSpec("prime", 3, 7))
    assert calibrated_convention(P).key() == CONV.key()
    assert verify_relations(2, 3, calibrated_convention(P), P).passed
