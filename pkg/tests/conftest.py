from fractions import Fraction

import pytest

from lgvw.poly_core import parse_polynomial
from lgvw.state_space import build_state_space
from lgvw.symmetry import resolve_group_spec


def space(poly, group="J", pairing=True):
    W = parse_polynomial(poly)
    return build_state_space(W, resolve_group_spec(group, W), with_pairing=pairing)


@pytest.fixture(scope="session")
def cubic_J():
    return space("x1^3+x2^3+x3^3")


@pytest.fixture(scope="session")
def x3_J():
    return space("x1^3")


F = Fraction
