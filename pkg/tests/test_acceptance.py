"""Acceptance criteria: one timed check per criterion, one PASS/FAIL line each.

Run with pytest, or directly with `python3 tests/test_acceptance.py` for the summary alone.
"""
import sys
import time
from fractions import Fraction as F

import pytest

from lgvw.catalog import SWEEP, check_cy3_census, degree_criterion, elliptic_checks, resolve_pair
from lgvw.fermat_frobenius import check_census, check_det
from lgvw.mirror import krawitz_map, verify_mirror
from lgvw.poly_core import parse_polynomial
from lgvw.quantization import check_bracket_defect, check_quantization_identity
from lgvw.state_space import build_state_space, check_poincare, check_supertrace_formula
from lgvw.symmetry import PhaseVector, maximal_group, resolve_group_spec
from lgvw.virasoro_ops import check_virasoro_relations

h = F(1, 2)
_spaces = {}


def _space(name):
    if name not in _spaces:
        W, G, _ = resolve_pair(name)
        _spaces[name] = build_state_space(W, G)
    return _spaces[name]


def table_rows():
    W = parse_polynomial("x1^3+x2^3+x3^3")
    S = build_state_space(W, resolve_group_spec("J", W))
    got = [(e.label(), e.mu_plus, e.mu_minus, e.parity, e.deg_c) for e in S.basis]
    expected = [
        ("1|(1/3,1/3,1/3)>", -h, -h, 1, 0),
        ("1|(2/3,2/3,2/3)>", h, h, 1, 1),
        ("dx1dx2dx3|(0,0,0)>", -h, h, -1, h),
        ("x1*x2*x3 dx1dx2dx3|(0,0,0)>", h, -h, -1, h),
    ]
    return got == expected, f"{len(got)} rows"


def supertrace():
    bad = [n for n in SWEEP if not check_supertrace_formula(_space(n))["holds"]]
    return not bad and len(SWEEP) >= 30, f"{len(SWEEP) - len(bad)}/{len(SWEEP)} pairs"


def poincare():
    bad = [n for n in SWEEP if not check_poincare(_space(n))["holds"]]
    return not bad and len(SWEEP) >= 30, f"{len(SWEEP) - len(bad)}/{len(SWEEP)} pairs"


def virasoro():
    names = [n for n in SWEEP if _space(n).rank <= 10]
    bad = [n for n in names if not check_virasoro_relations(_space(n), 3, 8)["holds"]]
    odd = sum(1 for n in names if any(e.is_odd for e in _space(n).basis))
    return not bad and "cubic" in names, f"{len(names) - len(bad)}/{len(names)} pairs, {odd} with odd classes"


def quantization():
    names = [n for n in SWEEP if _space(n).rank <= 10]
    bad = []
    for n in names:
        S = _space(n)
        ok = all(check_quantization_identity(S, k, 8)["holds"] for k in (-1, 0, 1, 2, 3))
        if not (ok and check_bracket_defect(S, 8)["holds"]):
            bad.append(n)
    return not bad, f"{len(names) - len(bad)}/{len(names)} pairs, k = -1..3 and bracket defect"


def determinant():
    bad = [d for d in range(4, 9) if not check_det(d)["holds"]]
    return not bad, f"d = 4..8, failing {bad}"


def census():
    bad = [d for d in range(3, 9) if not check_census(d)["holds"]]
    return not bad, f"d = 3..8, failing {bad}"


CUBIC_MIRROR = [
    ("1|(1/3,1/3,1/3)>", "dy1dy2dy3|(0,0,0)>", ["-1/2", "-1/2"], 1),
    ("1|(2/3,2/3,2/3)>", "y1*y2*y3 dy1dy2dy3|(0,0,0)>", ["1/2", "1/2"], 1),
    ("dx1dx2dx3|(0,0,0)>", "1|(1/3,1/3,1/3)>", ["-1/2", "1/2"], -1),
    ("x1*x2*x3 dx1dx2dx3|(0,0,0)>", "1|(2/3,2/3,2/3)>", ["1/2", "-1/2"], -1),
]


def mirror():
    names = []
    for n in SWEEP:
        S = _space(n)
        if PhaseVector(S.q) in S.G and S.G.issubset(maximal_group(S.W)):
            names.append(n)
    bad = []
    for n in names:
        corr = krawitz_map(_space(n))
        if not verify_mirror(corr)["holds"]:
            bad.append(n)
    rows = [(r["A"], r["B"], r["B_bigrading"], r["B_parity"]) for r in krawitz_map(_space("cubic")).table()]
    return not bad and rows == CUBIC_MIRROR, f"{len(names) - len(bad)}/{len(names)} pairs, cubic table matches"


def cy_census():
    r = check_cy3_census()
    return r["holds"], f"{r['found']} found, {r['table']} tabulated, E8 chain cell empty: {r['e8_chain_cell_empty']}"


def elliptic():
    r = elliptic_checks(kmax=3, M=8)
    return r["holds"], "identification, conjugation, D brackets, negative control"


def degree():
    W, G, _ = resolve_pair("quintic")
    r = degree_criterion(W, G)
    return r["holds"], f"rank {r['rank']}, age-one narrow sectors {r['age_one_narrow']}"


CRITERIA = [
    (1, "cubic state space table", table_rows, 1),
    (2, "supertrace formula", supertrace, 30),
    (3, "Poincare series cross-check", poincare, 30),
    (4, "Virasoro relations kmax=3 M=8", virasoro, 120),
    (5, "quantization identity and bracket defect", quantization, 30),
    (6, "quantum Euler determinant", determinant, 10),
    (7, "nonvanishing census", census, 5),
    (8, "mirror map verification", mirror, 30),
    (9, "CY-3 census", cy_census, 5),
    (10, "elliptic identification", elliptic, 10),
    (11, "quintic degree criterion", degree, 20),
]


def run(number, title, fn, limit):
    _spaces.clear()
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < limit
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d} {title}: {detail} ({elapsed:.2f}s, limit {limit}s)"
    return passed, ok, elapsed, line


@pytest.mark.parametrize("number, title, fn, limit", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    passed, ok, elapsed, line = run(number, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert elapsed < limit, line


if __name__ == "__main__":
    results = [run(*c) for c in CRITERIA]
    for r in results:
        print(r[3])
    sys.exit(0 if all(r[0] for r in results) else 1)
