from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from conftest import Z12, polynomials
from polyauto.errors import ArityMismatch, MalformedNormalization, NotSquare
from polyauto.jacobian import (
    PolyMap,
    PolyMatrix,
    check_keller,
    check_monge_ampere,
    check_parametrized_minors,
    determinant,
    divergence,
    jacobian_matrix,
    potential_to_map,
    principal_minor_sums,
)
from polyauto.families import dim2_homogeneous, triangular_param
from polyauto.poly import Polynomial, UniPoly


def const_matrix(rows, nvars=1):
    return PolyMatrix.from_rows([[Polynomial.constant(nvars, v) for v in r] for r in rows])


def leibniz(M: PolyMatrix):
    n = M.rows
    acc = Polynomial.zero(M.entries[0].nvars, M.entries[0].ring)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(acc.nvars, 1, acc.ring)
        for i, j in enumerate(perm):
            term = term * M[i, j]
        acc = acc - term if inv % 2 else acc + term
    return acc


def test_jacobian_examples():
    x, y = Polynomial.variables(2)
    assert jacobian_matrix(PolyMap.identity(2, x.ring)) == const_matrix([[1, 0], [0, 1]], 2)
    J = jacobian_matrix(PolyMap([x + y ** 2, y]))
    assert J.to_rows() == [[Polynomial.constant(2, 1), 2 * y], [Polynomial.zero(2), Polynomial.constant(2, 1)]]
    # sigma = xi^2, a = b = 1: u = x + 2(x+y), v = y - 2(x+y)
    # (a linear map, so built from its potential h = (x+y)^2 rather than the family constructor)
    P = potential_to_map((x + y) ** 2)
    assert P == PolyMap([x + 2 * (x + y), y - 2 * (x + y)])
    assert jacobian_matrix(P) == const_matrix([[3, 2], [-2, -1]], 2)


def test_determinant_examples():
    assert determinant(const_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == Polynomial.constant(1, 1)
    assert determinant(const_matrix([[3, 2], [-2, -1]])) == Polynomial.constant(1, 1)
    with pytest.raises(NotSquare):
        determinant(const_matrix([[1, 2]]))


def test_triangular_determinant_is_product_of_lambdas():
    n = 4
    X = Polynomial.variables(n)
    fs = [Polynomial.zero(n), X[0] ** 2, X[0] * X[1], X[1] ** 2 + X[0] * X[2]]
    pair = triangular_param([2, 3, 5, 7], fs)
    assert determinant(jacobian_matrix(pair.forward)) == Polynomial.constant(n, 210)


def test_principal_minor_sums_examples():
    assert principal_minor_sums(const_matrix([[0, 1], [0, 0]])) == [Polynomial.zero(1)] * 2
    I3 = const_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert [e.constant_term() for e in principal_minor_sums(I3)] == [3, 3, 1]
    # f = g = (x - y)^2
    x, y = Polynomial.variables(2)
    f = (x - y) ** 2
    E = principal_minor_sums(jacobian_matrix(PolyMap([f, f])))
    assert all(e.is_zero() for e in E)


def test_check_keller_examples():
    x, y = Polynomial.variables(2)
    rep = check_keller(PolyMap.identity(2, x.ring))
    assert rep.jacobian_is_constant and rep.constant_value == 1
    # a=1, b=3, c=1: xi = x + y, f = xi^2 - xi^3, g = -f
    xi = x + y
    f = xi ** 2 - xi ** 3
    assert check_keller(PolyMap([x + f, y - f])).constant_value == 1
    rep = check_keller(PolyMap([x + x ** 2, y]))
    assert not rep.jacobian_is_constant
    assert rep.determinant == 1 + 2 * x
    assert not rep.is_keller


def test_parametrized_minors():
    x, y = Polynomial.variables(2)
    rep = check_parametrized_minors(PolyMap([x + y ** 2 + y ** 3, y]), [1, 1])
    assert len(rep.minor_equations) == 3 and not rep.failed_minor_equations
    rep = check_parametrized_minors(PolyMap([x + y ** 2, y + x ** 2]), [1, 1])
    (bad,) = rep.failed_minor_equations
    assert bad.retained == (0, 1) and bad.deleted == ()
    assert bad.residual == -4 * x * y
    assert "failed: deleted={} retained={1,2} residual=-4*x1*x2" in rep.to_text()
    with pytest.raises(MalformedNormalization):
        check_parametrized_minors(PolyMap([x + y, y]), [1, 1])
    with pytest.raises(ArityMismatch):
        check_parametrized_minors(PolyMap([x, y]), [1])


def test_parametrized_minors_ordered_by_size():
    X = Polynomial.variables(3)
    P = PolyMap([2 * X[0], 3 * X[1] + X[0] ** 2, X[2] + X[0] * X[1]])
    rep = check_parametrized_minors(P, [2, 3, 1])
    sizes = [len(eq.retained) for eq in rep.minor_equations]
    assert sizes == sorted(sizes) and len(sizes) == 7
    assert rep.ok


def test_monge_ampere_examples():
    x, y = Polynomial.variables(2)
    assert check_monge_ampere(UniPoly.monomial(3).substitute(x + 2 * y)).is_zero()
    assert check_monge_ampere(x ** 2 + y ** 2) == Polynomial.constant(2, 4)
    assert check_monge_ampere(x * y) == Polynomial.constant(2, -1)
    with pytest.raises(ArityMismatch):
        check_monge_ampere(Polynomial.variable(3, 0))


def test_potential_to_map_examples():
    x, y = Polynomial.variables(2)
    assert potential_to_map(Polynomial.zero(2)).is_identity()
    sigma = UniPoly([0, 0, 0, 2, 1])
    a, b = 2, -3
    h = sigma.substitute(a * x + b * y)
    assert potential_to_map(h) == dim2_homogeneous(a, b, sigma).forward
    assert potential_to_map(x ** 3) == PolyMap([x, y - 3 * x ** 2])


def test_report_text_keys_in_order():
    x, y = Polynomial.variables(2)
    text = check_keller(PolyMap([x + y ** 2, y])).to_text()
    keys = [line.split(":")[0] for line in text.splitlines()]
    assert keys == ["jacobian_is_constant", "jacobian_constant", "jacobian_determinant",
                    "E1", "E2", "minor_equations", "failed_minor_equations"]


def test_divergence_free_shear():
    x, y = Polynomial.variables(2)
    assert divergence(PolyMap([x + y ** 2, y + x ** 3])).is_zero()


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(polynomials(nvars=2, max_degree=2, max_terms=3), min_size=n * n, max_size=n * n)
    .map(lambda es: PolyMatrix(n, n, es)))


@given(matrices)
def test_determinant_matches_leibniz(M):
    assert determinant(M) == leibniz(M)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(polynomials(nvars=2, ring=Z12, max_degree=2, max_terms=3),
                       min_size=n * n, max_size=n * n).map(lambda es: PolyMatrix(n, n, es))))
def test_determinant_matches_leibniz_composite_modulus(M):
    assert determinant(M) == leibniz(M)


@given(matrices)
def test_characteristic_polynomial_identity(F):
    # det(lam*I + F) = sum_k E_k(F) lam^(n-k), with lam an extra variable
    n = F.rows
    nv = F.entries[0].nvars + 1
    lam = Polynomial.variable(nv, nv - 1)
    rows = [[F[i, j].extend(nv) + (lam if i == j else 0) for j in range(n)] for i in range(n)]
    lhs = determinant(PolyMatrix.from_rows(rows))
    rhs = lam ** n
    for k, e in enumerate(principal_minor_sums(F), start=1):
        rhs = rhs + e.extend(nv) * lam ** (n - k)
    assert lhs == rhs
