import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import Z101
from polyauto.errors import (
    ConditionViolated,
    DegenerateGenerator,
    NonInvertibleLambda,
    TriangularityViolated,
    ZeroDenominator,
)
from polyauto.families import (
    Dim4Case,
    Family,
    FamilySpec,
    dim2_extruded,
    dim2_homogeneous,
    dim2_worked_examples,
    dim3_full,
    dim3_partial,
    dim4_partial,
    dimN_full,
    triangular_param,
    worked_example_invariant_eta,
    worked_example_invariant_xi,
    worked_example_potentials,
    worked_example_triangular,
)
from polyauto.jacobian import PolyMap, check_keller, check_monge_ampere, divergence, potential_to_map
from polyauto.oracle import formal_inverse, inverse_oracle_stabilizes, is_exact_inverse, measure_inverse_degree
from polyauto.poly import Polynomial, UniPoly
from polyauto.ring import QQ, RingSpec

xi2, xi3 = UniPoly.monomial(2), UniPoly.monomial(3)
ZERO = UniPoly([])


def round_trips(pair):
    ok, _ = is_exact_inverse(pair.forward, pair.inverse)
    return ok


def keller_one(pair):
    rep = check_keller(pair.forward)
    return rep.jacobian_is_constant and rep.constant_value == pair.jacobian_constant


# two dimensions


def test_dim2_cubic_example():
    pair = dim2_homogeneous(1, 1, xi3)
    x, y = Polynomial.variables(2)
    s = 3 * (x + y) ** 2
    assert pair.forward == PolyMap([x + s, y - s])
    assert pair.inverse == PolyMap([x - s, y + s])
    assert round_trips(pair) and keller_one(pair)


def test_dim2_zero_generator_is_identity():
    pair = dim2_homogeneous(3, -2, ZERO)
    assert pair.forward.is_identity() and pair.inverse.is_identity()


def test_dim2_mixed_generator_degrees():
    pair = dim2_homogeneous(2, -1, UniPoly([0, 0, 0, 1, 1]))
    assert pair.forward.degree() == pair.inverse.degree() == 3
    assert pair.predicted_deg_forward == pair.predicted_deg_inverse == 3
    assert keller_one(pair) and round_trips(pair)


def test_dim2_rejects_linear_derivative():
    # sigma = xi^2 gives a linear map, which is not normalized
    with pytest.raises(DegenerateGenerator):
        dim2_homogeneous(1, 1, xi2)
    with pytest.raises(ConditionViolated):
        dim2_homogeneous(0, 0, xi3)


def test_dim2_extruded_examples():
    x, y, z = Polynomial.variables(3)
    pair = dim2_extruded(1, 1, xi2, UniPoly.monomial(1))
    g = 2 * z * (x + y)
    assert pair.forward == PolyMap([x + g, y - g, z])
    assert keller_one(pair) and round_trips(pair)
    pair = dim2_extruded(1, 0, xi3, UniPoly([1, 0, 1]))
    assert round_trips(pair)
    # constant zeta embeds the planar family
    flat = dim2_homogeneous(2, 5, xi3)
    pair = dim2_extruded(2, 5, xi3, UniPoly([1]))
    assert [c.compose([x, y]) for c in flat.forward] == [pair.forward[0], pair.forward[1]]


# three dimensions


def test_dim3_partial_eta_invariant():
    pair = dim3_partial(1, 0, 1, 1, 1, 1, xi2, xi2)
    assert pair.info["case"] == "eta-invariant"
    assert pair.forward.degree() == 2
    assert pair.inverse.degree() == pair.predicted_deg_inverse == 4
    assert round_trips(pair) and keller_one(pair)
    assert measure_inverse_degree(pair.forward) == 4


def test_dim3_partial_xi_invariant_mirror():
    pair = dim3_partial(0, 1, 1, 1, 1, 1, xi3, xi2)
    assert pair.info["case"] == "xi-invariant"
    assert pair.inverse.degree() == pair.predicted_deg_inverse == 6
    assert round_trips(pair)
    assert measure_inverse_degree(pair.forward) == 6


def test_dim3_partial_single_generator():
    pair = dim3_partial(1, 0, 1, 1, 1, 1, ZERO, xi3)
    assert pair.inverse.degree() == 3
    assert round_trips(pair)


def test_dim3_partial_conditions():
    with pytest.raises(ConditionViolated, match="proportional"):
        dim3_partial(1, 1, 1, 2, 2, 2, xi2, xi2)
    with pytest.raises(ConditionViolated, match=r"\(ar - cp\)\(br - cq\)"):
        dim3_partial(1, 2, 1, 3, 1, 1, xi2, xi2)
    with pytest.raises(ZeroDenominator):
        dim3_partial(1, 0, 0, 1, 1, 1, xi2, xi2)


def test_dim3_full_examples():
    x, y, z = Polynomial.variables(3)
    pair = dim3_full(0, 0, 1, xi2, xi3)
    assert pair.forward == PolyMap([x + z ** 2, y + z ** 3, z])
    assert pair.inverse == PolyMap([x - z ** 2, y - z ** 3, z])
    pair = dim3_full(1, 1, 1, xi2, xi2)
    assert keller_one(pair) and round_trips(pair)
    assert dim3_full(4, 5, 6, ZERO, ZERO).forward.is_identity()


def test_invariant_form_corrections():
    # sum c_i P_i = sum c_i x_i + correction, for every recorded form
    for pair in (dim3_partial(1, 0, 1, 1, 1, 1, xi2, xi3), dim3_partial(0, 1, 1, 1, 1, 1, xi3, xi2),
                 dim3_full(2, 3, 1, xi2, xi3), dim2_homogeneous(2, 7, xi3)):
        X = Polynomial.variables(pair.nvars)
        for form in pair.invariant_forms:
            lhs = sum((c * p for c, p in zip(form.coefficients, pair.forward)), Polynomial.zero(pair.nvars))
            rhs = sum((c * v for c, v in zip(form.coefficients, X)), Polynomial.zero(pair.nvars))
            assert lhs == rhs + form.correction
        assert pair.invariant_forms[0].is_full


# four dimensions

A_THREE = [[1, 1, 0, 1], [1, 1, 0, 1], [1, 1, 0, 1]]


def test_dim4_three_invariant():
    pair = dim4_partial(A_THREE, xi2, xi2, xi2, Dim4Case.THREE_INVARIANT)
    assert pair.inverse.degree() == pair.forward.degree() == 2
    assert round_trips(pair)


def test_dim4_one_invariant():
    # a11 a24 != a14 a21 etc., but the three required equalities hold
    A = [[1, 0, 0, 1], [2, 0, 0, 1], [3, 1, 0, 1]]
    pair = dim4_partial(A, xi2, xi2, xi2, "one-invariant")
    assert pair.predicted_deg_inverse == 8
    assert pair.inverse.degree() == 8
    assert round_trips(pair) and keller_one(pair)


def test_dim4_zero_generators_identity():
    A = [[1, 0, 0, 1], [2, 0, 0, 1], [3, 1, 0, 1]]
    pair = dim4_partial(A, ZERO, ZERO, ZERO, Dim4Case.ONE_INVARIANT)
    assert pair.forward.is_identity() and pair.inverse.is_identity()


def test_dim4_case_mismatch():
    with pytest.raises(ConditionViolated, match="case"):
        dim4_partial(A_THREE, xi2, xi2, xi2, Dim4Case.ONE_INVARIANT)
    with pytest.raises(ConditionViolated):
        dim4_partial([[1, 1, 0, 0], [1, 1, 0, 1], [1, 1, 0, 1]], xi2, xi2, xi2, Dim4Case.THREE_INVARIANT)


# n dimensions


def test_dimN_two_matches_planar_relation():
    a1, a2 = 3, 2
    pair = dimN_full([a1, a2], [xi3])
    x, y = Polynomial.variables(2)
    f = xi3.substitute(a1 * x + a2 * y)
    assert pair.forward == PolyMap([x + f, y - f * Fraction(a1, a2)])
    assert round_trips(pair)


def test_dimN_zero_generators_identity():
    assert dimN_full([1, 2, 3, 4], [ZERO] * 3).forward.is_identity()


def _dimN5():
    return dimN_full([1] * 5, [UniPoly.monomial(i + 1) for i in range(1, 5)])


def test_dimN_five_oracle():
    pair = _dimN5()
    assert pair.forward.degree() == pair.predicted_deg_inverse == 5
    assert keller_one(pair)
    # the formal inverse matches the closed form through degree 5 and then stops
    assert formal_inverse(pair.forward, 5).as_map() == pair.inverse
    assert inverse_oracle_stabilizes(pair.forward, 5)
    rng = random.Random(5)
    for _ in range(10):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)]
        assert pair.inverse.evaluate(pair.forward.evaluate(pt)) == pt


@pytest.mark.slow
def test_dimN_five_exact_round_trip():
    assert round_trips(_dimN5())


# triangular


def test_triangular_four():
    X = Polynomial.variables(4)
    fs = [Polynomial.zero(4), X[0] ** 2, X[0] * X[1], X[1] ** 2 + X[0] * X[2]]
    pair = triangular_param([1, 1, 1, 1], fs)
    assert keller_one(pair) and round_trips(pair)


def test_triangular_scaling_only():
    pair = triangular_param([2, 5], [Polynomial.zero(2)] * 2)
    x, y = Polynomial.variables(2)
    assert pair.inverse == PolyMap([x * Fraction(1, 2), y * Fraction(1, 5)])
    assert pair.jacobian_constant == 10


def test_triangular_hand_inverse():
    x, y = Polynomial.variables(2)
    pair = triangular_param([2, 3], [Polynomial.zero(2), x ** 2])
    assert pair.inverse == PolyMap([x * Fraction(1, 2), (y - x ** 2 * Fraction(1, 4)) * Fraction(1, 3)])
    assert round_trips(pair)


def test_triangular_errors():
    x, y = Polynomial.variables(2)
    with pytest.raises(NonInvertibleLambda):
        triangular_param([0, 1], [Polynomial.zero(2), x ** 2])
    with pytest.raises(NonInvertibleLambda):
        Z4 = RingSpec.integers_mod(4)
        triangular_param([2, 1], [Polynomial.zero(2, Z4), Polynomial.variable(2, 0, Z4) ** 2])
    with pytest.raises(TriangularityViolated):
        triangular_param([1, 1], [Polynomial.zero(2), y ** 2])
    with pytest.raises(DegenerateGenerator):
        triangular_param([1, 1], [Polynomial.zero(2), x])


def test_triangular_mod_prime():
    R = Z101
    X = Polynomial.variables(3, R)
    pair = triangular_param([3, 7, 100], [Polynomial.zero(3, R), X[0] ** 3, X[0] * X[1] ** 2], R)
    assert round_trips(pair)
    assert pair.jacobian_constant == 3 * 7 * 100 % 101


# worked 2D examples


@given(st.integers(-9, 9).filter(bool), st.integers(-9, 9).filter(bool), st.integers(-9, 9).filter(bool))
def test_worked_examples_keller(a, b, c):
    for P in dim2_worked_examples(a, b, c):
        rep = check_keller(P)
        assert rep.jacobian_is_constant and rep.constant_value == 1
    xi_map = worked_example_invariant_xi(a, b, c)
    eta_map = worked_example_invariant_eta(a, b)
    assert divergence(xi_map).is_zero() and divergence(eta_map).is_zero()


@given(st.integers(-9, 9).filter(bool), st.integers(-9, 9).filter(bool), st.integers(-9, 9).filter(bool))
def test_worked_potentials(a, b, c):
    maps = dim2_worked_examples(a, b, c)
    for P, h in zip(maps, worked_example_potentials(a, b, c)):
        assert potential_to_map(h) == P
    for h in worked_example_potentials(a, b, c)[2:]:
        assert check_monge_ampere(h).is_zero()


def test_worked_eta_example_values():
    x, y = Polynomial.variables(2)
    P = worked_example_invariant_eta(1, 1)
    assert P == PolyMap([x + (x - y) ** 2, y + (x - y) ** 2])


def test_worked_triangular_example_values():
    x, y = Polynomial.variables(2)
    first, _ = worked_example_triangular(1, 0)
    assert first == PolyMap([x + y ** 2, y])
    assert check_keller(first).constant_value == 1


def test_worked_xi_example_g_is_minus_f():
    P = worked_example_invariant_xi(1, 3, 1)
    x, y = Polynomial.variables(2)
    f, g = P[0] - x, P[1] - y
    assert (f + g).is_zero() and f.total_degree() == 3


def test_worked_xi_needs_nonzero():
    with pytest.raises(ConditionViolated):
        worked_example_invariant_xi(1, 0, 1)


# FamilySpec


def test_family_spec_text_round_trip():
    X = Polynomial.variables(3)
    specs = [
        FamilySpec(Family.DIM2_HOMOGENEOUS, QQ, [1, -2], [UniPoly([0, 0, 0, 1, Fraction(1, 2)])]),
        FamilySpec("dim4_partial", QQ, sum(A_THREE, []), [xi2, xi2, xi3], "three-invariant"),
        FamilySpec(Family.TRIANGULAR_PARAM, QQ, [2, 3, 5], [Polynomial.zero(3), X[0] ** 2, X[0] * X[1]]),
        FamilySpec(Family.DIMN_FULL, Z101, [1, 2, 3], [UniPoly([0, 0, 4], Z101), UniPoly([0, 0, 0, 1], Z101)]),
    ]
    for spec in specs:
        text = spec.to_text()
        back = FamilySpec.from_text(text)
        assert back == spec and back.to_text() == text
        assert round_trips(back.build())
