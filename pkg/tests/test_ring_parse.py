from fractions import Fraction

import pytest
from hypothesis import given

from conftest import Z12, Z101, polynomials
from polyauto.errors import (
    BadModulus,
    NotInvertible,
    PolySyntaxError,
    UnknownVariable,
)
from polyauto.jacobian import PolyMap, check_keller
from polyauto.parse import MapDocument, format_map, parse_map, parse_polynomial
from polyauto.poly import Polynomial
from polyauto.ring import QQ, RingSpec


def test_ringspec_basics():
    assert str(QQ) == "Q"
    assert str(Z12) == "Zmod 12"
    assert RingSpec.parse("Zmod 12") == Z12
    assert RingSpec.parse(" Q ") == QQ
    with pytest.raises(BadModulus):
        RingSpec.integers_mod(1)
    with pytest.raises(PolySyntaxError):
        RingSpec.parse("Zmod")


def test_zmod_inverse():
    assert Z101.inverse(3) * 3 % 101 == 1
    assert Z12.is_unit(5) and not Z12.is_unit(4)
    with pytest.raises(NotInvertible):
        Z12.inverse(4)
    assert Z101.coerce(Fraction(1, 2)) == 51


def test_parse_basic():
    x, y = Polynomial.variables(2)
    assert parse_polynomial("x1 + x2^2") == x + y ** 2
    assert parse_polynomial("-(x1 - x2)*(x1 + x2)") == y ** 2 - x ** 2
    assert parse_polynomial("1/2*x1", 2) == x * Fraction(1, 2)
    assert parse_polynomial("  3 ") == Polynomial.constant(1, 3)


@pytest.mark.parametrize("text,col", [
    ("2x1", 2),
    ("x1 x2", 4),
    ("x1 + ", 6),
    ("x1 ^ -1", 6),
    ("(x1 + x2", 9),
    ("x1 $ x2", 4),
])
def test_syntax_errors_are_located(text, col):
    with pytest.raises(PolySyntaxError) as info:
        parse_polynomial(text, 2)
    assert info.value.column == col
    assert f"column {col}" in str(info.value)


def test_unknown_variable():
    with pytest.raises(UnknownVariable, match="column 6"):
        parse_polynomial("x1 + x3", 2)
    with pytest.raises(UnknownVariable):
        parse_polynomial("x0", 2)


def test_fraction_rejected_mod_m():
    with pytest.raises(PolySyntaxError):
        parse_polynomial("1/2*x1", 1, Z101)
    assert parse_polynomial("103*x1", 1, Z101) == Polynomial.variable(1, 0, Z101) * 2


def test_map_document_shear():
    P = parse_map("vars: 2\nring: Q\nx1 + x2^2\nx2\n")
    x, y = Polynomial.variables(2)
    assert P == PolyMap([x + y ** 2, y])


def test_map_document_errors_carry_lines():
    with pytest.raises(PolySyntaxError) as info:
        parse_map("vars: 2\nring: Q\n# comment\nx1\n2x2\n")
    assert info.value.line == 5
    with pytest.raises(PolySyntaxError):
        parse_map("vars: 2\nring: Q\nx1\n")
    with pytest.raises(PolySyntaxError):
        parse_map("ring: Q\nx1\n")
    with pytest.raises(PolySyntaxError) as info:
        parse_map("vars: 1\nring: Zmod 1\nx1\n")
    assert info.value.line == 2


def test_worked_eta_family_text():
    # f = g = (x - y)^2
    text = "vars: 2\nring: Q\nx1 + x1^2 - 2*x1*x2 + x2^2\nx2 + x1^2 - 2*x1*x2 + x2^2\n"
    assert check_keller(parse_map(text)).constant_value == 1


def test_metadata_round_trip():
    P = parse_map("vars: 2\nring: Zmod 7\nx1 + 3*x2^2\nx2\n")
    text = format_map(P, family="triangular_param", role="forward")
    doc = MapDocument.from_text(text)
    assert doc.poly_map == P
    assert doc.metadata == {"family": "triangular_param", "role": "forward"}
    assert doc.to_text() == text


@given(polynomials(nvars=3, max_degree=4))
def test_print_parse_round_trip_q(p):
    assert parse_polynomial(str(p), 3) == p
    assert str(parse_polynomial(str(p), 3)) == str(p)


@given(polynomials(nvars=2, ring=Z12))
def test_print_parse_round_trip_mod(p):
    assert parse_polynomial(str(p), 2, Z12) == p
