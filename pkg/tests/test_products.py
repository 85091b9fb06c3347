import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ringlab import PrimeField
from ringlab.algebra import AlgebraError, field_algebra, hilbert_function, ideal_power, is_gorenstein, quotient
from ringlab.generate import random_gorenstein
from ringlab.linalg import matmul
from ringlab.products import connected_sum, fibre_product

from conftest import ring
from oracle import RefAlgebra

GF = PrimeField()


def chain(n):
    return ring(f"x^{n}", "x")


def test_fibre_product_of_square_zero_lines():
    T = fibre_product(chain(2), chain(2)).algebra
    assert T.dim == 3 and ideal_power(T, 2).dim == 0
    assert hilbert_function(T) == hilbert_function(ring("x^2; x*y; y^2"))


def test_fibre_product_with_field_is_identity(golden):
    T = fibre_product(golden, field_algebra(GF)).algebra
    assert T.dim == golden.dim and hilbert_function(T) == hilbert_function(golden)


def test_fibre_product_of_cubic_chains():
    w = fibre_product(chain(3), chain(3))
    T = w.algebra
    ref = RefAlgebra(["x", "y"], ["x*y", "x**3", "y**3"])
    assert T.dim == ref.dim == 5
    assert hilbert_function(T) == ref.hilbert()
    x = w.embed_R[:, 1]
    y = w.embed_S[:, 1]
    assert not T.mul(x, y).any()


def test_fibre_product_field_mismatch():
    with pytest.raises(AlgebraError):
        fibre_product(chain(2), ring("x^2", "x", p=101))


def test_connected_sum_of_cubic_chains():
    Q = connected_sum(chain(3), chain(3)).algebra
    ref = RefAlgebra(["x", "y"], ["x*y", "x**2-y**2"])
    assert Q.dim == ref.dim == 4 and is_gorenstein(Q)
    assert hilbert_function(Q) == ref.hilbert()


def test_connected_sum_golden(golden):
    Q = connected_sum(chain(5), chain(3)).algebra
    assert Q.dim == 6 and is_gorenstein(Q)
    assert hilbert_function(Q) == hilbert_function(golden)


def test_connected_sum_degenerate():
    Q = connected_sum(chain(2), chain(2)).algebra
    assert Q.dim == 2 and hilbert_function(Q) == [1, 1]


def test_connected_sum_rejects_non_gorenstein(m2):
    with pytest.raises(AlgebraError):
        connected_sum(m2, chain(3))


def test_connected_sum_witness_maps_socles(golden):
    w = connected_sum(chain(4), golden)
    F = GF
    a = matmul(w.fibre.embed_R, w.delta_R, F)
    b = matmul(w.fibre.embed_S, w.delta_S, F)
    assert not matmul(w.projection, F.reduce(a - b), F).any()
    assert matmul(w.projection, a, F).any()


gor = st.tuples(st.sampled_from(["stretched", "compressed", "quadratic"]), st.integers(1, 3), st.integers(2, 4), st.integers(0, 10**6))


def _draw(kind, n, s, seed):
    if kind == "compressed" and n == 1:
        kind = "stretched"
    if kind == "quadratic" and n == 1:
        kind = "stretched"
    return random_gorenstein(kind, n, s, seed)[1]


@settings(max_examples=25)
@given(gor, gor)
def test_length_and_filtration_facts(a, b):
    try:
        R, S = _draw(*a), _draw(*b)
    except AlgebraError:
        return
    T = fibre_product(R, S).algebra
    assert T.dim == R.dim + S.dim - 1
    for i in range(1, max(R.loewy_length, S.loewy_length) + 2):
        assert ideal_power(T, i).dim == ideal_power(R, i).dim + ideal_power(S, i).dim
    Q = connected_sum(R, S).algebra
    assert Q.dim == R.dim + S.dim - 2
    assert is_gorenstein(Q)
    if R.dim > 2 and S.dim > 2:
        assert Q.loewy_length == max(R.loewy_length, S.loewy_length)
        for n in range(2, Q.loewy_length + 1):
            lhs = quotient(Q, ideal_power(Q, n))
            rR = quotient(R, ideal_power(R, min(n, R.loewy_length)))
            rS = quotient(S, ideal_power(S, min(n, S.loewy_length)))
            rhs = fibre_product(rR, rS).algebra
            assert lhs.dim == rhs.dim and hilbert_function(lhs) == hilbert_function(rhs)
