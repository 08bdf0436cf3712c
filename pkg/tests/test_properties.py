from fractions import Fraction as F

from hypothesis import HealthCheck, given, settings, strategies as st

from lgvw.jacobian import jacobian_algebra
from lgvw.poly_core import (Atom, assemble_atoms, classify_invertible, format_polynomial, milnor_number,
                            parse_polynomial, transpose, weight_system)
from lgvw.state_space import build_state_space, check_poincare, check_supertrace_formula
from lgvw.symmetry import PhaseVector, maximal_group, mirror_group, subgroup_generated
from lgvw.virasoro_ops import DiffOperator, commutator

FAST = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def invertible_polys(draw, max_vars=3, max_exp=4):
    n = draw(st.integers(1, max_vars))
    free = list(range(n))
    atoms = []
    while free:
        kind = draw(st.sampled_from(["Fermat", "Chain", "Loop"] if len(free) >= 2 else ["Fermat"]))
        size = 1 if kind == "Fermat" else draw(st.integers(2, len(free)))
        vs, free = free[:size], free[size:]
        exps = [draw(st.integers(2, max_exp)) for _ in vs]
        atoms.append(Atom(kind, exps, vs))
    return assemble_atoms(atoms, n)


@st.composite
def pairs(draw):
    W = draw(invertible_polys())
    GW = maximal_group(W)
    q = weight_system(W)
    J = PhaseVector(q)
    extra = draw(st.lists(st.sampled_from(sorted(GW)), max_size=2))
    return W, subgroup_generated([J] + extra, W.nvars), GW


@FAST
@given(invertible_polys())
def test_print_parse_round_trip(W):
    text = format_polynomial(W)
    assert parse_polynomial(text, W.nvars) == W
    assert transpose(transpose(W)) == W
    assert len(classify_invertible(W)) >= 1


@FAST
@given(invertible_polys())
def test_milnor_number_two_ways(W):
    assert jacobian_algebra(W).mu == milnor_number(weight_system(W))


@FAST
@given(invertible_polys())
def test_normal_form_idempotent(W):
    alg = jacobian_algebra(W)
    p = W.derivative(0) * W.derivative(W.nvars - 1) + W
    nf = alg.normal_form(p)
    assert alg.normal_form(type(W)(W.nvars, nf)) == nf


@FAST
@given(pairs())
def test_group_axioms_and_ages(pair):
    W, G, GW = pair
    assert G.issubset(GW)
    n = W.nvars
    for g in G:
        assert -g in G
        for h in list(G)[:5]:
            assert g + h in G
        assert g.age() + (-g).age() == n - len(g.fixed_indices())


@FAST
@given(pairs())
def test_mirror_group_orders(pair):
    W, G, GW = pair
    GT = mirror_group(G, W)
    assert len(G) * len(GT) == len(GW)
    assert set(mirror_group(GT, transpose(W))) == set(G)


@settings(max_examples=15, deadline=None)
@given(pairs())
def test_supertrace_and_poincare(pair):
    W, G, _ = pair
    S = build_state_space(W, G)
    assert check_supertrace_formula(S)["holds"]
    assert check_poincare(S)["holds"]
    for a in range(S.rank):
        assert any(S.eta[a][b] != 0 for b in range(S.rank))


PARITY = (0, 1, 0, 1)
index = st.tuples(st.integers(0, 2), st.integers(0, 3))


@st.composite
def weyl_monomials(draw):
    cr = draw(st.lists(index, max_size=2))
    an = draw(st.lists(index, max_size=2))
    hb = draw(st.sampled_from([-2, 0, 2]))
    c = F(draw(st.integers(-3, 3)) or 1)
    return DiffOperator(PARITY).add_term(c, creators=cr, annihilators=an, hbar=hb)


@FAST
@given(weyl_monomials(), weyl_monomials(), weyl_monomials())
def test_super_jacobi(A, B, C):
    if A.is_zero() or B.is_zero() or C.is_zero():
        return
    sign = -1 if (A.grade() and B.grade()) else 1
    lhs = commutator(A, commutator(B, C))
    rhs = commutator(commutator(A, B), C) + commutator(B, commutator(A, C)).scale(sign)
    assert (lhs - rhs).is_zero()


@FAST
@given(weyl_monomials(), weyl_monomials())
def test_super_antisymmetry(A, B):
    if A.is_zero() or B.is_zero():
        return
    sign = 1 if (A.grade() and B.grade()) else -1
    assert (commutator(A, B) - commutator(B, A).scale(sign)).is_zero()
