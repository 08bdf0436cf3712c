from fractions import Fraction as F

import pytest

from lgvw.errors import TruncationTooSmall
from lgvw.virasoro_ops import (DiffOperator, check_grading_identity, check_virasoro_relations, commutator,
                               grading_operator, pochhammer, space_parity, virasoro_operator)

from conftest import space


def test_pochhammer():
    assert pochhammer(5, 0) == 1
    assert pochhammer(F(3, 2), 2) == F(15, 4)
    assert pochhammer(-1, 3) == 0


def test_string_operator_shape(x3_J):
    L = virasoro_operator(x3_J, -1, 4)
    assert set(L.hbar_powers()) == {0, -2}
    assert L.constant() == 0
    one = x3_J.index_of_identity()
    assert L.terms[((), ((0, one),), 0, 0)] == -1


def test_l0_on_cubic(cubic_J):
    L = virasoro_operator(cubic_J, 0, 4)
    one = cubic_J.index_of_identity()
    assert L.constant() == 0
    assert L.terms[((), ((1, one),), 0, 0)] == -1


def test_l1_hbar_part(x3_J):
    L = virasoro_operator(x3_J, 1, 4)
    hbar_terms = {k: c for k, c in L.terms.items() if k[2] == 2}
    assert hbar_terms
    assert all(all(m == 0 for m, _ in k[1]) for k in hbar_terms)


def test_truncation_errors(x3_J):
    with pytest.raises(TruncationTooSmall):
        virasoro_operator(x3_J, 3, 3)
    with pytest.raises(TruncationTooSmall):
        check_virasoro_relations(x3_J, 3, 7)
    with pytest.raises(ValueError):
        virasoro_operator(x3_J, -2, 4)


def test_l0_lm1_commutator(x3_J):
    M = 6
    L0, Lm = virasoro_operator(x3_J, 0, M), virasoro_operator(x3_J, -1, M)
    assert (commutator(L0, Lm) - Lm).window(M - 1).is_zero()


def test_l1_lm1_contraction_constant(cubic_J, x3_J):
    for S in (x3_J, cubic_J):
        M = 6
        lhs = commutator(virasoro_operator(S, 1, M), virasoro_operator(S, -1, M)).window(M - 2)
        rhs = virasoro_operator(S, 0, M).scale(2).window(M - 2)
        assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("poly, group", [("x1^3", "J"), ("x1^3+x2^3+x3^3", "J"), ("x1^4+x2^4", "J"),
                                         ("x1^2x2+x2^3", "J")])
def test_relations(poly, group):
    assert check_virasoro_relations(space(poly, group), 2, 6)["holds"]


def test_literal_hbar_placement_breaks_relations(x3_J):
    M = 8
    ops = {k: virasoro_operator(x3_J, k, M, literal_hbar_term=True) for k in range(-1, 5)}
    assert not check_virasoro_relations(x3_J, 2, M, operators=ops)["holds"]


def test_wrong_constant_breaks_relations(x3_J):
    M = 6
    ops = {k: virasoro_operator(x3_J, k, M) for k in range(-1, 3)}
    ops[0] = virasoro_operator(x3_J, 0, M, str_constant=F(1))
    assert not check_virasoro_relations(x3_J, 1, M, operators=ops)["holds"]


def test_grading_identity(cubic_J, x3_J):
    assert check_grading_identity(cubic_J, 5)["holds"]
    assert check_grading_identity(x3_J, 5)["holds"]


def test_pure_t_d_commutator_has_no_hbar(x3_J):
    E = grading_operator(x3_J, 4)
    L = DiffOperator(space_parity(x3_J), M=4).add_term(1, creators=[(1, 0)], annihilators=[(0, 0)])
    assert set(commutator(E, L).hbar_powers()) <= {0}


def test_odd_variables_square_to_zero(cubic_J):
    par = space_parity(cubic_J)
    odd = par.index(1)
    op = DiffOperator(par).add_term(1, creators=[(0, odd), (0, odd)])
    assert op.is_zero()
