from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ringlab.algebra import AlgebraError, field_algebra, ideal_power, quotient
from ringlab.linalg import PrimeField
from ringlab.products import connected_sum, fibre_product
from ringlab.resolution import PresentedModule, betti_sequence
from ringlab.series import (
    Polynomial,
    RationalFn,
    SeriesError,
    T,
    TruncatedSeries,
    backelin_roos_denominator,
    check_denominator,
    check_deviation_divisibility,
    check_dress,
    check_levin_socle,
    derive_connected_sum_poincare,
    deviations,
    golod_bound,
    golod_certificate,
    product_formula,
    stretched_poincare,
)

from conftest import ring
from oracle import deviations_bruteforce, series_div

GF = PrimeField()


# -- arithmetic -----------------------------------------------------------------

def test_geometric_series():
    assert (1 / TruncatedSeries([1, -1], 6)).coeffs == [1] * 7


def test_square_cancels():
    s = Polynomial([1, -1]) ** 2
    assert (1 / s.series(8)) * s.series(8) == TruncatedSeries.one(8)


def test_long_division_reference():
    assert RationalFn(Polynomial([1]), Polynomial([1, -2, 1])).expand(8).coeffs == series_div([1], [1, -2, 1], 8)


def test_reciprocal_needs_unit():
    with pytest.raises(SeriesError):
        1 / TruncatedSeries([0, 1], 4)


def test_polynomial_division():
    q, r = Polynomial([1, 2, 1]).divmod(Polynomial([1, 1]))
    assert q == Polynomial([1, 1]) and r == Polynomial([0])
    assert Polynomial([1, 1]).divides(Polynomial([1, 2, 1]))
    assert not Polynomial([1, 2]).divides(Polynomial([1, 1]))


coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


@given(coeff_lists, coeff_lists, st.integers(0, 8))
def test_series_ring_laws(a, b, N):
    A, B = TruncatedSeries(a, N), TruncatedSeries(b, N)
    assert A * B == B * A
    assert (A + B) - B == A
    if a[0] != 0:
        assert (B / A) * A == B


# -- deviations -----------------------------------------------------------------

def test_deviations_of_complete_intersection():
    P = RationalFn(Polynomial([1]), Polynomial([1, -2, 1])).expand(8)
    assert deviations(P) == [2, 2, 0, 0, 0, 0, 0, 0]
    assert deviations(P) == deviations_bruteforce(P.coeffs, 8)


def test_deviations_trivial():
    assert deviations(TruncatedSeries.one(6)) == [0] * 6


def test_deviations_golod_reference():
    P = RationalFn(Polynomial([1]), Polynomial([1, -2])).expand(8)
    assert deviations(P) == deviations_bruteforce(P.coeffs, 8) == [2, 3, 2, 3, 6, 11, 18, 30]


def test_first_deviation_is_edim(golden):
    P = TruncatedSeries(betti_sequence(golden, None, 6))
    assert deviations(P)[0] == golden.edim


def test_negative_deviation_rejected():
    with pytest.raises(SeriesError, match="not a Poincare series"):
        deviations(TruncatedSeries([1, 2, 0, 0], 3))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_product_formula_inverts_deviations(e):
    N = len(e)
    assert deviations(product_formula(e, N)) == e


# -- the checkers -----------------------------------------------------------------

def test_dress_trivial_factors():
    k = field_algebra(GF)
    r = check_dress(k, k, None, 4)
    assert r.passed and r.details["P_R"].coeffs[0] == 1 and all(c == 0 for c in r.details["P_R"].coeffs[1:])


def test_dress_module_clause():
    S, Tt = ring("x^2", "x"), ring("y^2", "y")
    M = PresentedModule.quotient(S, [S.gens[0]])
    r = check_dress(S, Tt, M, 10)
    assert r.passed and r.details["module_clause"]


def test_dress_on_golden_and_chain(golden):
    r = check_dress(golden, ring("u^3", "u"), None, 8)
    assert r.passed


def test_levin_identity(golden, x2y2):
    assert check_levin_socle(golden, 12).passed
    assert check_levin_socle(x2y2, 12).passed
    with pytest.raises(AlgebraError):
        check_levin_socle(ring("x^3", "x"))


def test_golod_verdicts(m2, x2y2):
    r = golod_certificate(m2, 10)
    assert r.details["verdict"] == "numerically-golod" and r.passed
    # the bound (1+t)^2 / (1 - 3t - 2t^2) expands to 1/(1-2t)
    assert golod_bound(m2, 6).coeffs == [2**i for i in range(7)]
    r = golod_certificate(x2y2, 8)
    assert r.details["verdict"] == "not-golod"
    assert r.diffs[0][0] == 3
    assert golod_certificate(field_algebra(GF), 6).details["verdict"] == "numerically-golod"


def test_backelin_roos_denominator(x2y2, m2, golden):
    d = backelin_roos_denominator(x2y2)
    assert d == Polynomial([1, 0, -2, 0, 1])
    assert d == (1 - T**2) ** 2
    with pytest.raises(AlgebraError):
        backelin_roos_denominator(m2)
    dg = backelin_roos_denominator(golden)
    assert dg == 1 - T * (Polynomial([1, 2, 1]) - 1) + T**3 * Polynomial([1, 1])


def test_denominator_check_on_residue_field(x2y2):
    r = check_denominator(x2y2, None, (1 - T**2) ** 2, 12)
    assert r.passed
    assert r.details["polynomial_part"] == Polynomial([1, 2, 1])


def test_denominator_check_on_stretched_module(golden):
    M = PresentedModule.quotient(golden, [golden.evaluate(__import__("ringlab").parse_poly("x^2 + y", golden.names))])
    d = Polynomial([1, 1]) ** 2 * Polynomial([1, -2, 1])
    r = check_denominator(golden, M, d, 12)
    assert r.passed and not r.details["window_empty"]


def test_stretched_closed_forms(x2y2, m2):
    p = stretched_poincare(x2y2, 10)
    assert p.verified and p.formula.denominator == Polynomial([1, -2, 1])
    p = stretched_poincare(m2, 10)
    assert p.verified and p.formula.denominator == Polynomial([1, -2])
    p = stretched_poincare(ring("x^3", "x"), 8)
    assert p.verified and p.formula.denominator == Polynomial([1, -1])


def test_stretched_type_n_fibre_product():
    # S x_k T with T of square-zero maximal ideal: stretched, non-Gorenstein, type = edim
    R = fibre_product(ring("x^2", "x"), ring("u^2; u*v; v^2", "u,v")).algebra
    p = stretched_poincare(R, 8)
    assert p.label == "stretched-type-n" and p.verified


def test_truncations_are_golod(golden):
    for i in range(2, golden.loewy_length + 1):
        B = quotient(golden, ideal_power(golden, i))
        p = stretched_poincare(B, 8, parent=golden, power=i)
        assert p.verified and p.formula.denominator == Polynomial([1, -2])


def test_no_prediction_guard():
    with pytest.raises(AlgebraError, match="no closed-form prediction"):
        stretched_poincare(ring("x^2; y^2; z^2", "x,y,z"), 4)


def test_connected_sum_formula(x2y2):
    N = 10
    P = TruncatedSeries(betti_sequence(x2y2, None, N))
    Q = connected_sum(x2y2, x2y2).algebra
    assert derive_connected_sum_poincare(P, P) == TruncatedSeries(betti_sequence(Q, None, N))
    other = ring("u^2; u*v + v^2", "u,v")
    P2 = TruncatedSeries(betti_sequence(other, None, N))
    Q2 = connected_sum(x2y2, other).algebra
    assert derive_connected_sum_poincare(P, P2) == TruncatedSeries(betti_sequence(Q2, None, N))


def test_connected_sum_formula_guard():
    P = TruncatedSeries([1] * 6)
    with pytest.raises(SeriesError):
        derive_connected_sum_poincare(P, P)


def test_divisibility(x2y2, golden):
    r = check_deviation_divisibility(x2y2, (1 - T**2) ** 2, 2, 12)
    assert r.passed and r.details["deviation_formula_values"][:2] == [2, 2]
    r = check_deviation_divisibility(golden, backelin_roos_denominator(golden), 2, 12)
    assert r.passed


def test_divisibility_hypothesis_failure(m2):
    r = check_deviation_divisibility(m2, Polynomial([1]), 2, 8)
    assert not r.passed and "not polynomial" in r.details["reason"]
