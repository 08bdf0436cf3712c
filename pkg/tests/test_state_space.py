from fractions import Fraction as F

import pytest

from lgvw.errors import NotAdmissible
from lgvw.poly_core import parse_polynomial
from lgvw.state_space import (GradedSeries, build_state_space, check_poincare, check_supertrace_formula,
                              euler_characteristic, poincare_series_pair, poincare_series_product,
                              series_limits, supertrace_theta)
from lgvw.symmetry import subgroup_generated, PhaseVector

from conftest import space

h = F(1, 2)


def test_cubic_rows(cubic_J):
    rows = {(e.mu_plus, e.mu_minus, e.parity, e.deg_c) for e in cubic_J.basis}
    assert rows == {(-h, -h, 1, 0), (h, h, 1, 1), (-h, h, -1, h), (h, -h, -1, h)}
    assert cubic_J.basis[0].label() == "1|(1/3,1/3,1/3)>"
    assert euler_characteristic(cubic_J) == 0
    assert supertrace_theta(cubic_J) == 0


def test_x3(x3_J):
    assert x3_J.rank == 2
    assert all(e.monomial == () for e in x3_J.basis)
    assert x3_J.eta == [[0, 1], [1, 0]]
    assert supertrace_theta(x3_J) == F(-4, 9)
    assert check_supertrace_formula(x3_J)["holds"]


def test_x2_supertrace():
    assert supertrace_theta(space("x1^2")) == F(-1, 4)


@pytest.mark.parametrize("d", range(2, 7))
def test_fermat_pair_rank_and_gradings(d):
    S = space(f"x1^{d}+x2^{d}")
    assert S.rank == 2 * d - 2
    assert sum(1 for e in S.basis if e.gamma.is_identity()) == d - 1
    assert euler_characteristic(S) == 2 * d - 2
    assert all(e.mu_plus == e.mu_minus for e in S.basis)


@pytest.mark.parametrize("poly, group", [
    ("x1^3+x2^3+x3^3", "J"), ("x1^3+x2^3+x3^3", "max"), ("x1^2x2+x2^2x3+x3^3", "J"),
    ("x1^2x2+x2^2x3+x3^2x1", "max"), ("x1^4+x2^4+x3^2", "J"),
])
def test_pairing_duality(poly, group):
    S = space(poly, group)
    for a, e in enumerate(S.basis):
        partners = [b for b in range(S.rank) if S.eta[a][b] != 0]
        assert partners
        for b in partners:
            assert S.basis[b].gamma == -e.gamma
            assert e.mu_plus + S.basis[b].mu_plus == 0
        assert S.eta[a] == [S.eta[b][a] for b in range(S.rank)]
    assert S.basis[S.index_of_identity()].deg_c == 0


def test_max_group_has_symmetric_bigrading():
    S = space("x1^2x2+x2^2x3+x3^2x1", "max")
    assert all(e.mu_plus == e.mu_minus for e in S.basis)


def test_not_admissible():
    W = parse_polynomial("x1^3+x2^3")
    with pytest.raises(NotAdmissible):
        build_state_space(W, subgroup_generated([PhaseVector([F(1, 3), F(2, 3)])]))


def test_series_examples(x3_J):
    assert poincare_series_product(parse_polynomial("x1^3")) == GradedSeries({F(1, 3): -1, F(2, 3): -1})
    assert poincare_series_product(parse_polynomial("x1^2")) == GradedSeries({h: -1})
    P = poincare_series_pair(x3_J)
    assert P == GradedSeries({F(-1, 6): 1, F(1, 6): 1})
    assert series_limits(P) == (2, F(1, 18))
    assert series_limits(GradedSeries()) == (0, 0)
    assert poincare_series_pair(space("x1^3+x2^3+x3^3")) == GradedSeries()


@pytest.mark.parametrize("poly, group", [("x1^3+x2^3+x3^3", "J"), ("x1^3x2+x2^3x1+x3^2", "max"),
                                         ("x1^4+x2^4", "J"), ("x1^2x2+x2^3", "J")])
def test_poincare_routes(poly, group):
    assert check_poincare(space(poly, group))["holds"]
