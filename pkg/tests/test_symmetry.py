from fractions import Fraction as F

import pytest

from lgvw.errors import ConfigError, NotASubgroup, NotASymmetryGroup
from lgvw.poly_core import parse_polynomial, transpose
from lgvw.symmetry import (DiagonalGroup, PhaseVector, is_admissible, maximal_group, mirror_group,
                           resolve_group_spec, sector_data, special_linear_part, subgroup_generated)


@pytest.mark.parametrize("poly, order", [
    ("x1^3+x2^3+x3^3", 27), ("x1^2x2+x2^2x3+x3^2x1", 9), ("x1^2x2+x2^2x3+x3^3", 12),
    ("x1^2", 2), ("x1^4+x2^4+x3^2", 32), ("x1^3+x2^3+x3^3+x1x2x3", 9),
])
def test_maximal_group_order(poly, order):
    assert len(maximal_group(parse_polynomial(poly))) == order


def test_phase_vector_reduction_and_age():
    g = PhaseVector([F(4, 3), F(-1, 3), 0])
    assert g == (F(1, 3), F(2, 3), 0)
    assert g.age() == 1
    assert g.order() == 3
    assert g.fixed_indices() == (2,)


def test_subgroup_generated_quartic():
    # 2J = (1/2, 1/2, 0) already lies in <J>, so the group is cyclic of order 4
    W = parse_polynomial("x1^4+x2^4+x3^2")
    J = PhaseVector([F(1, 4), F(1, 4), F(1, 2)])
    assert len(subgroup_generated([J, PhaseVector([F(1, 2), F(1, 2), 0])])) == 4
    pillow = resolve_group_spec([[[1, 4], [1, 4], [0, 1]], [[0, 1], [0, 1], [1, 2]]], W)
    assert len(pillow) == 8 and J in pillow


def test_sector_data_cubic():
    q = (F(1, 3),) * 3
    sd = sector_data(PhaseVector([F(1, 3)] * 3), q)
    assert (sd.age, sd.iota, sd.n_gamma) == (1, 0, 0)
    sd = sector_data(PhaseVector([0, 0, 0]), q)
    assert (sd.age, sd.iota, sd.n_gamma) == (0, -1, 3)


def test_admissibility_and_errors():
    W = parse_polynomial("x1^3+x2^3+x3^3")
    assert is_admissible(resolve_group_spec("J", W), W)
    bad = subgroup_generated([PhaseVector([F(1, 2), 0, 0])])
    with pytest.raises(NotASymmetryGroup):
        is_admissible(bad, W)
    with pytest.raises(NotASubgroup):
        mirror_group(bad, W)
    with pytest.raises(ConfigError):
        resolve_group_spec("nonsense", W)
    with pytest.raises(ConfigError):
        resolve_group_spec([[[1, 3], [1, 3]]], W)


def test_mirror_group_duality():
    W = parse_polynomial("x1^2x2+x2^2x3+x3^3")
    GW = maximal_group(W)
    J = resolve_group_spec("J", W)
    assert len(mirror_group(GW, W)) == 1
    JT = mirror_group(J, W)
    assert set(JT) == set(special_linear_part(maximal_group(transpose(W))))
    assert set(mirror_group(JT, transpose(W))) == set(J)
    assert len(J) * len(JT) == len(GW)


def test_group_containment():
    W = parse_polynomial("x1^3+x2^3+x3^3")
    J = resolve_group_spec("J", W)
    assert J.issubset(maximal_group(W))
    assert isinstance(J, DiagonalGroup)
