from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import Z101
from polyauto.errors import NonInvertibleLinearPart, NonzeroConstantPart
from polyauto.families import dim2_homogeneous, dim3_partial, dimN_full, triangular_param
from polyauto.jacobian import PolyMap
from polyauto.oracle import (
    NotPolynomialUpTo,
    back_substitution_inverse,
    default_dmax,
    exact_inverse,
    formal_inverse,
    inverse_oracle_stabilizes,
    is_exact_inverse,
    matrix_inverse,
    measure_inverse_degree,
    series_profile,
)
from polyauto.poly import Polynomial, UniPoly
from polyauto.ring import QQ, RingSpec


def test_shear_inverse():
    x, y = Polynomial.variables(2)
    P = PolyMap([x + y ** 2, y])
    Q = formal_inverse(P, 2)
    assert Q.as_map() == PolyMap([x - y ** 2, y])
    assert Q.truncation_degree == 2
    assert inverse_oracle_stabilizes(P, 2)
    assert exact_inverse(P) == PolyMap([x - y ** 2, y])


def test_identity_any_truncation():
    I = PolyMap.identity(3, QQ)
    for D in (1, 2, 5):
        assert formal_inverse(I, D).as_map() == I


def test_truncation_matches_closed_form():
    pair = dim2_homogeneous(1, 1, UniPoly.monomial(3))
    Q = formal_inverse(pair.forward, 2).as_map()
    assert Q == PolyMap([c.truncate(2) for c in pair.inverse])


def test_residual_of_wrong_inverse():
    # residual is Q(P(x)) - x
    x, y = Polynomial.variables(2)
    ok, residual = is_exact_inverse(PolyMap([x + y ** 2, y]), PolyMap([x, y]))
    assert not ok
    assert residual == PolyMap([y ** 2, Polynomial.zero(2)])
    ok, residual = is_exact_inverse(PolyMap.identity(2, QQ), PolyMap.identity(2, QQ))
    assert ok and all(c.is_zero() for c in residual)


def test_not_polynomial():
    x, y = Polynomial.variables(2)
    P = PolyMap([x + x ** 2, y])
    out = measure_inverse_degree(P, 8)
    assert out == NotPolynomialUpTo(8)
    assert str(out) == "NotPolynomialUpTo(8)"
    assert not inverse_oracle_stabilizes(P, 4)
    assert back_substitution_inverse(P) is None


def test_measured_degrees():
    pair = dim3_partial(1, 0, 1, 1, 1, 1, UniPoly.monomial(2), UniPoly.monomial(2))
    assert measure_inverse_degree(pair.forward) == 4
    phis = [UniPoly.monomial(7), UniPoly.monomial(3)]
    pair = dimN_full([1, 2, 1], phis)
    assert measure_inverse_degree(pair.forward) == 7


def test_default_dmax():
    x, y, z = Polynomial.variables(3)
    assert default_dmax(PolyMap([x + y ** 3, y, z])) == 10


def test_linear_part_errors():
    Z4 = RingSpec.integers_mod(4)
    x, y = Polynomial.variables(2, Z4)
    with pytest.raises(NonInvertibleLinearPart):
        formal_inverse(PolyMap([x * 2, y]), 2)
    x, y = Polynomial.variables(2)
    with pytest.raises(NonzeroConstantPart):
        formal_inverse(PolyMap([x + 1, y]), 2)


def test_mod_prime_with_linear_part():
    x, y = Polynomial.variables(2, Z101)
    # lambdas 2 and 3 are units mod 101
    pair = triangular_param([2, 3], [Polynomial.zero(2, Z101), x ** 3], Z101)
    assert exact_inverse(pair.forward) == pair.inverse


def test_matrix_inverse():
    M = matrix_inverse([[2, 1], [1, 1]], QQ)
    assert M == [[1, -1], [-1, 2]]
    M = matrix_inverse([[2, 0], [0, 4]], QQ)
    assert M[1][1] == Fraction(1, 4)


def test_back_substitution_any_order():
    x, y, z = Polynomial.variables(3)
    # z is free, then x depends on z, then y on x and z
    P = PolyMap([2 * x + z ** 2, y + x * z, z])
    Q = back_substitution_inverse(P)
    assert Q is not None and is_exact_inverse(P, Q)[0]


def test_series_profile():
    x, y = Polynomial.variables(2)
    prof = series_profile(PolyMap([x + y ** 2, y]))
    assert prof[:3] == [(1, 2), (2, 1), (3, 0)]
    prof = series_profile(PolyMap([x + x ** 2, y]), 6)
    assert [d for d, _ in prof] == list(range(1, 7))
    assert all(count > 0 for _, count in prof)


@given(st.integers(-5, 5).filter(bool), st.integers(-5, 5).filter(bool),
       st.lists(st.integers(-4, 4), min_size=2, max_size=3))
def test_oracle_agrees_with_closed_form(a, b, tail):
    sigma = UniPoly([0, 0, 0] + tail)
    pair = dim2_homogeneous(a, b, sigma)
    d = max(pair.inverse.degree(), 1)
    assert formal_inverse(pair.forward, d).as_map() == pair.inverse
    assert inverse_oracle_stabilizes(pair.forward, d)


@given(st.integers(2, 4), st.integers(0, 2 ** 16))
def test_oracle_is_idempotent_on_triangular(n, seed):
    import random

    from polyauto.corpus import random_triangular_generator

    rng = random.Random(seed)
    fs = [random_triangular_generator(rng, n, i, max_degree=3) for i in range(n)]
    pair = triangular_param([1] * n, fs)
    Q = back_substitution_inverse(pair.forward)
    assert Q == pair.inverse
    assert back_substitution_inverse(Q) == pair.forward
