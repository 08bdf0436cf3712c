from fractions import Fraction as F

import pytest

from lgvw.errors import (NonUniqueWeights, NotInvertible, NotQuasiHomogeneous, ParseError,
                         UnclassifiableAtom, WeightOutOfRange)
from lgvw.poly_core import (Poly, canonical_form, central_charge, classify_invertible, exponent_matrix,
                            format_polynomial, hessian, is_calabi_yau, milnor_number, parse_polynomial,
                            transpose, weight_system)


def test_parse_basic_and_juxtaposition():
    W = parse_polynomial("x1^2x2+x2^2x3+x3^3")
    assert W.nvars == 3
    assert W.terms == {(2, 1, 0): 1, (0, 2, 1): 1, (0, 0, 3): 1}


def test_parse_coefficients_and_signs():
    W = parse_polynomial("-3/2*x1^2 + 5 x2 - 7")
    assert W.terms == {(2, 0): F(-3, 2), (0, 1): 5, (0, 0): -7}


@pytest.mark.parametrize("text, pos", [("x1^3+*x2", 5), ("x1^-2", 3), ("x1 + + x2", 5), ("1/0*x1", 2),
                                       ("x1 $ x2", 3)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text)
    assert info.value.position == pos


def test_format_round_trip_with_negative_terms():
    W = parse_polynomial("x1^3 - 2*x1*x2 + 1/3*x2^4")
    assert parse_polynomial(format_polynomial(W), W.nvars) == W


def test_arithmetic_and_derivative():
    x = Poly.monomial((1, 0))
    y = Poly.monomial((0, 1))
    p = (x + y) ** 2
    assert p.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert p.derivative(0).terms == {(1, 0): 2, (0, 1): 2}
    assert (p - p).is_zero()


@pytest.mark.parametrize("poly, q", [
    ("x1^3+x2^3+x3^3", (F(1, 3),) * 3),
    ("x1^2x2+x2^2x3+x3^3", (F(1, 3),) * 3),
    ("x1^4x2+x2^3+x3^2", (F(1, 6), F(1, 3), F(1, 2))),
    ("x1^2", (F(1, 2),)),
])
def test_weights(poly, q):
    assert tuple(weight_system(parse_polynomial(poly))) == q


def test_weight_errors():
    with pytest.raises(NotQuasiHomogeneous):
        weight_system(parse_polynomial("x1^2+x1^3"))
    with pytest.raises(NonUniqueWeights):
        weight_system(parse_polynomial("x1^2x2^2"))
    with pytest.raises(WeightOutOfRange):
        weight_system(parse_polynomial("x1+x2^2"))


def test_central_charge_milnor_cy():
    W = parse_polynomial("x1^3+x2^3+x3^3")
    q = weight_system(W)
    assert central_charge(q) == 1
    assert milnor_number(q) == 8
    assert is_calabi_yau(W)
    assert not is_calabi_yau(parse_polynomial("x1^3"))


def test_classification():
    assert [a.kind for a in classify_invertible(parse_polynomial("x1^2x2+x2^2x3+x3^2x1"))] == ["Loop"]
    atoms = classify_invertible(parse_polynomial("x1^3x2+x2^4+x3^2"))
    assert sorted(repr(a) for a in atoms) == ["Chain(3, 4)", "Fermat(2)"]
    with pytest.raises(NotInvertible):
        exponent_matrix(parse_polynomial("x1^3+x2^3+x3^3+x1*x2*x3"))
    with pytest.raises(UnclassifiableAtom):
        classify_invertible(parse_polynomial("x1x2+x2^2x1"))


def test_transpose_of_chain():
    W = parse_polynomial("x1^2x2+x2^2x3+x3^3")
    assert transpose(W) == parse_polynomial("x1^2+x1x2^2+x2x3^3")
    assert transpose(transpose(W)) == W


def test_hessian_of_cubic():
    assert hessian(parse_polynomial("x1^3+x2^3+x3^3")) == parse_polynomial("216x1x2x3")


def test_canonical_form_ignores_permutation():
    a = canonical_form(parse_polynomial("x1^3x2+x2^4+x3^2"))
    b = canonical_form(parse_polynomial("x1^2+x2^4+x3^3x2"))
    assert a == b
