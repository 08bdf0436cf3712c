import pytest
import sympy

from lgvw.errors import PreconditionNotMet, UncoveredPair
from lgvw.fermat_frobenius import (C, FermatBasis, alpha, beta, census_nonvanishing, check_census, check_det,
                                   classical_associativity, classical_product, degree_constraint,
                                   expected_families, quantum_euler_vector, quantum_product,
                                   selection_rule, semisimplicity_verdict, t)


@pytest.mark.parametrize("d", range(2, 7))
def test_basis_matches_state_space(d):
    B = FermatBasis(d)
    assert len(B.labels) == 2 * d - 2
    assert B.pairing_is_dual()
    assert B.deg[alpha(1)] == 0
    assert all(B.theta[b] == 0 for b in B.betas)


def test_selection_examples():
    d = 5
    assert selection_rule(d, [alpha(1), alpha(2), alpha(3)])
    assert degree_constraint(d, [alpha(1), alpha(2), alpha(3)])
    assert not selection_rule(d, [alpha(1), alpha(1), alpha(1)])
    assert selection_rule(d, [alpha(4)] * 3 + [alpha(2)] * 4)
    assert degree_constraint(d, [alpha(4)] * 3 + [alpha(2)] * 4)


@pytest.mark.parametrize("d", range(3, 9))
def test_census(d):
    assert check_census(d)["holds"]
    assert (d - 1, d - 1, d - 1, 4) in census_nonvanishing(d)


def test_census_needs_d3():
    with pytest.raises(PreconditionNotMet):
        census_nonvanishing(2)


def test_quantum_product_examples():
    d = 5
    assert quantum_product(d, alpha(4), alpha(4)) == {alpha(1): C ** 2 * t ** 4 / 4}
    assert quantum_product(d, alpha(1), beta(2)) == {beta(2): 1}
    assert quantum_product(d, beta(2), beta(3)) == {alpha(1): -C * t ** 2 / 2, alpha(4): 1}
    assert quantum_product(d, alpha(4), alpha(2)) == {alpha(2): C * t ** 2 / 2}
    with pytest.raises(UncoveredPair):
        quantum_product(d, alpha(2), alpha(2))
    with pytest.raises(PreconditionNotMet):
        quantum_product(3, alpha(1), alpha(1))


def test_classical_table():
    assert classical_product(4, alpha(2), alpha(2)) == {alpha(3): 1}
    assert classical_product(4, beta(1), beta(3)) == {alpha(3): 1}
    assert classical_product(4, alpha(2), beta(1)) == {}
    for d in range(2, 7):
        assert classical_associativity(d)


def test_euler_vector_d4():
    E = quantum_euler_vector(4)
    assert set(E) == {alpha(1), alpha(3)}
    assert sympy.expand(E[alpha(3)]) == 6


@pytest.mark.parametrize("d", range(4, 9))
def test_determinant(d):
    r = check_det(d)
    assert r["holds"] and r["t_degree"] == 4 * d - 4


def test_semisimplicity():
    assert semisimplicity_verdict(2)["semisimple"]
    assert semisimplicity_verdict(3)["semisimple"]
    assert semisimplicity_verdict(5)["semisimple"]
