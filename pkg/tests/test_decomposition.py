import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ringlab import PrimeField, parse_poly
from ringlab.algebra import (
    AlgebraError,
    element_times_ideal,
    hilbert_function,
    ideal_generated,
    ideal_power,
    ideal_product,
    is_gorenstein,
)
from ringlab.decomposition import (
    DecompositionError,
    OutOfRange,
    factorize,
    multiplicity11_certificate,
    normalize_split_generators,
    principal_multiple_generator,
    principal_reduction_of_m2,
    socle_split_test,
    split_connected_sum,
)
from ringlab.generate import random_connected_sum_dual, random_gorenstein
from ringlab.linalg import matmul
from ringlab.products import connected_sum

from conftest import ring


def el(A, text):
    return A.evaluate(parse_poly(text, A.names))


def is_chain(A, n):
    return A.dim == n and any(np.any(A.power(g, n - 1)) for g in A.gens)


def assert_principal_multiple(A, I, y):
    mI = ideal_product(A.maximal_ideal, I)
    assert I.contains(y) and not mI.contains(y)
    assert element_times_ideal(A, y, I) == ideal_product(I, I)


# -- principal multiples -------------------------------------------------------

def test_principal_multiple_chain():
    A = ring("x^4", "x")
    y = principal_multiple_generator(A, A.maximal_ideal)
    assert_principal_multiple(A, A.maximal_ideal, y)


def test_principal_multiple_square_zero_products(x2y2):
    # both x + y and x itself satisfy the identity; the property is what matters
    m = x2y2.maximal_ideal
    y = principal_multiple_generator(x2y2, m)
    assert_principal_multiple(x2y2, m, y)
    assert element_times_ideal(x2y2, el(x2y2, "x + y"), m) == ideal_power(x2y2, 2)


def test_principal_multiple_when_square_vanishes(m2):
    y = principal_multiple_generator(m2, m2.maximal_ideal)
    assert_principal_multiple(m2, m2.maximal_ideal, y)


def test_principal_multiple_zero_ideal(golden):
    assert not principal_multiple_generator(golden, ideal_generated(golden, [])).any()


def test_principal_multiple_violation():
    # m = (x, y, z) in k[x,y,z]/(x,y,z)^2 + ... : x m needs two generators
    A = ring("x^2; y^2; z^2; x*y*z", "x,y,z")
    with pytest.raises(DecompositionError, match="mu"):
        principal_multiple_generator(A, A.maximal_ideal)


def test_principal_multiple_exhaustive_mode():
    A = ring("x^2; y^2", p=5)
    m = A.maximal_ideal
    y = principal_multiple_generator(A, m, exhaustive=True)
    assert_principal_multiple(A, m, y)


# -- principal reduction of m^2 -------------------------------------------------

@pytest.mark.parametrize("rels", ["x*y; y^2; x^3", "x^2; y^2", "x*y; x^4 - y^2"])
def test_principal_reduction(rels):
    A = ring(rels)
    x = principal_reduction_of_m2(A)
    m2 = ideal_power(A, 2)
    assert A.maximal_ideal.contains(x) and not m2.contains(x)
    assert element_times_ideal(A, x, A.maximal_ideal) == m2
    if A.loewy_length >= 3:
        assert not ideal_power(A, 3).contains(A.mul(x, x))


def test_principal_reduction_golden_picks_x(golden):
    x = principal_reduction_of_m2(golden)
    # x is a unit multiple of the class of x modulo m^2
    assert x[golden.basis.index("x")] != 0 and x[golden.basis.index("y")] == 0


def test_principal_reduction_guard():
    with pytest.raises(DecompositionError, match="mu"):
        principal_reduction_of_m2(ring("x^2; y^2; z^2", "x,y,z"))


# -- generator normalization ---------------------------------------------------

def test_normal_form_golden(golden):
    nf = normalize_split_generators(golden, el(golden, "x"))
    assert nf.split == 1 and len(nf.gens) == 2
    x, y = nf.gens
    assert not golden.mul(x, y).any()
    assert ideal_generated(golden, [golden.mul(y, y)]) == golden.socle


def test_normal_form_on_built_sum():
    Q = connected_sum(ring("x^5", "x"), ring("u^2; v^2", "u,v")).algebra
    x1 = principal_reduction_of_m2(Q)
    nf = normalize_split_generators(Q, x1)
    assert nf.split == 1 and len(nf.second) == 2
    sq = ideal_generated(Q, [Q.mul(a, b) for a in nf.second for b in nf.second])
    assert sq == Q.socle
    assert socle_split_test(Q)


def test_normal_form_guard(x2y2):
    with pytest.raises(DecompositionError, match="lo >= 3"):
        normalize_split_generators(x2y2, el(x2y2, "x"))


# -- socle split test and the split itself --------------------------------------

def test_socle_split_examples(golden, x2y2):
    assert socle_split_test(golden)
    assert not socle_split_test(ring("x^4", "x"))
    with pytest.raises(DecompositionError, match="lo >= 3"):
        socle_split_test(x2y2)
    with pytest.raises(DecompositionError, match="Gorenstein"):
        socle_split_test(ring("x^3; x*y; y^3"))


def test_split_golden(golden):
    c = split_connected_sum(golden)
    assert is_chain(c.S, 5) and is_chain(c.T, 3)
    assert c.I == ideal_generated(golden, [el(golden, "y"), el(golden, "x^4")]) and c.I.dim == 2
    assert c.K == ideal_generated(golden, [el(golden, "x")])
    assert all(c.checks.values())


def test_split_phi_on_all_basis_pairs(golden):
    c = split_connected_sum(golden)
    F, Q, R = golden.field, c.Q, golden
    pairs = 0
    for i in range(Q.dim):
        for j in range(Q.dim):
            lhs = matmul(c.psi, Q.table[i, j], F)
            rhs = R.mul(c.psi[:, i], c.psi[:, j])
            assert np.array_equal(lhs, rhs)
            pairs += 1
    assert pairs == 36


def test_split_round_trip_edim_two_factor():
    # the cubic chain has lo = 2, so the quartic chain is the smallest one to split off
    Q = connected_sum(ring("x^4", "x"), ring("u^2; v^2", "u,v")).algebra
    c = split_connected_sum(Q)
    assert c.T.loewy_length == 2 and c.T.edim == 2 and c.T.dim == 4
    assert is_chain(c.S, 4)


def test_split_guard_on_low_loewy_length():
    Q = connected_sum(ring("x^3", "x"), ring("u^2; v^2", "u,v")).algebra
    assert Q.loewy_length == 2
    with pytest.raises(DecompositionError, match="lo >= 3"):
        split_connected_sum(Q)


def test_split_refuses_when_criterion_fails():
    with pytest.raises(DecompositionError, match="criterion fails"):
        split_connected_sum(ring("x^4", "x"))


# -- factorize and the length certificate ---------------------------------------

def test_factorize_iterated_sum():
    A = connected_sum(connected_sum(ring("x^5", "x"), ring("u^2; v^2", "u,v")).algebra, ring("w^3", "w")).algebra
    fac = factorize(A)
    # both lo-2 pieces leave together; the chain is what remains
    assert fac.terminal == "criterion-indecomposable" and fac.terminal_edim_le_4
    assert len(fac.certificates) == 1
    assert is_chain(fac.factors[-1], 5)
    assert hilbert_function(fac.factors[0]) == [1, 3, 1]
    assert sum(f.dim for f in fac.factors) - 2 * len(fac.certificates) == A.dim


def test_factorize_trivial_cases(x2y2):
    fac = factorize(ring("x^4", "x"))
    assert fac.terminal == "criterion-indecomposable" and fac.terminal_edim_le_4 and len(fac.factors) == 1
    fac = factorize(x2y2)
    assert fac.terminal == "lo<=2" and len(fac.factors) == 1


def test_length_certificate_examples(golden):
    c = multiplicity11_certificate(golden)
    assert c.kind == "edim<=4" and c.edim == 2
    _, Q5 = random_gorenstein("quadratic", 5, 2, seed=3)
    assert Q5.dim <= 11 and multiplicity11_certificate(Q5).kind == "lo<=2"


def test_length_certificate_edim_five_splits():
    F, A = random_connected_sum_dual([("stretched", 1, 3), ("quadratic", 4, 2)], seed=7)
    assert A.edim == 5 and A.loewy_length >= 3 and A.dim <= 11
    c = multiplicity11_certificate(A)
    assert c.kind == "split" and c.factorization.certificates


def test_length_certificate_out_of_range():
    A = ring("x^12", "x")
    with pytest.raises(OutOfRange, match="out of theorem's range"):
        multiplicity11_certificate(A)


# -- round trip property -------------------------------------------------------

@settings(max_examples=15)
@given(st.integers(1, 2), st.integers(3, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_split_round_trip_property(nS, sS, nT, seed):
    try:
        _, S = random_gorenstein("stretched", nS, sS, seed)
        _, T = random_gorenstein("quadratic", nT, 2, seed + 1) if nT > 1 else random_gorenstein("stretched", 1, 2, seed + 1)
    except AlgebraError:
        return
    R = connected_sum(S, T).algebra
    assert socle_split_test(R)
    c = split_connected_sum(R)
    assert c.S.loewy_length == R.loewy_length == S.loewy_length
    assert c.S.dim + c.T.dim - 2 == R.dim
    assert c.T.loewy_length == 2
    assert is_gorenstein(c.S) and is_gorenstein(c.T)
