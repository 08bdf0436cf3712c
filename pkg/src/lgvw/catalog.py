"""Built-in LG pairs, the three-variable Calabi-Yau census and composite checks."""
from fractions import Fraction
from functools import lru_cache
from itertools import product

import sympy

from .errors import ConfigError, PreconditionNotMet
from .poly_core import (Atom, assemble_atoms, canonical_form, central_charge, exponent_matrix,
                        is_calabi_yau, parse_polynomial, weight_system)
from .symmetry import is_special_linear, maximal_group, resolve_group_spec, sector_data
from .state_space import build_state_space

# three-variable invertible Calabi-Yau polynomials, grouped by weight system
CY3_TABLE = {
    (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)): [
        "x1^3+x2^3+x3^3",
        "x1^2x2+x2^2x3+x3^3",
        "x1^2x2+x2^2x3+x3^2x1",
        "x1^3+x2^2x3+x3^3",
        "x1^2x2+x1x2^2+x3^3",
    ],
    (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)): [
        "x1^4+x2^4+x3^2",
        "x1^3x2+x2^2x3+x3^2",
        "x1^3x2+x2^4+x3^2",
        "x1^4+x2^2x3+x3^2",
        "x1^3x2+x2^3x1+x3^2",
    ],
    (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)): [
        "x1^6+x2^3+x3^2",
        "x1^4x2+x2^3+x3^2",
        "x1^3+x2^3x3+x3^2",
    ],
}

PILLOWCASE = ("x1^4+x2^4+x3^2", [[[1, 4], [1, 4], [0, 1]], [[0, 1], [0, 1], [1, 2]]])
PILLOWCASE_2 = ("x1^4+x2^4", [[[1, 4], [1, 4]], [[0, 1], [1, 2]]])


def _cy_slug(poly):
    return poly.replace("^", "").replace("+", "_")


def _build_catalog():
    cat = {}
    for a in range(2, 7):
        cat[f"x{a}"] = (f"x1^{a}", "J")
    cat["cubic"] = ("x1^3+x2^3+x3^3", "J")
    cat["cubic-max"] = ("x1^3+x2^3+x3^3", "max")
    for polys in CY3_TABLE.values():
        for p in polys:
            cat[f"cy-{_cy_slug(p)}-J"] = (p, "J")
            cat[f"cy-{_cy_slug(p)}-max"] = (p, "max")
    for d in range(2, 9):
        cat[f"fermat2-{d}"] = (f"x1^{d}+x2^{d}", "J")
    cat["pillowcase"] = PILLOWCASE
    cat["pillowcase-2"] = PILLOWCASE_2
    cat["quintic"] = ("x1^5+x2^5+x3^5+x4^5+x5^5", "J")
    return cat


CATALOG = _build_catalog()

# pairs swept by the per-pair acceptance checks (the quintic is too large for them)
SWEEP = [name for name in CATALOG if name != "quintic"]


def resolve_pair(name=None, poly=None, group=None):
    """Return (W, G, label) from a catalog name or a polynomial string plus group spec."""
    if name is not None:
        if name in CATALOG:
            p, g = CATALOG[name]
            if group is not None:
                g = group
        else:
            try:
                parse_polynomial(name)
            except Exception:
                raise ConfigError(f"unknown pair {name!r}; known: {', '.join(sorted(CATALOG))}") from None
            p, g = name, group or "J"
    elif poly is not None:
        p, g = poly, group or "J"
    else:
        raise ConfigError("give a catalog pair or a polynomial")
    W = parse_polynomial(p)
    G = resolve_group_spec(g, W)
    label = name if name is not None else p
    return W, G, label


# ---------------------------------------------------------------- CY-3 census

@lru_cache(maxsize=None)
def _atom_weights(kind, exps):
    """Solve a_i q_i + q_{i+1} = 1 along the atom (q_{k+1} = 0 for chains, q_1 for loops)."""
    k = len(exps)
    if kind == "Fermat":
        return (Fraction(1, exps[0]),)
    if kind == "Chain":
        q = [Fraction(0)] * k
        nxt = Fraction(0)
        for i in reversed(range(k)):
            q[i] = (1 - nxt) / exps[i]
            nxt = q[i]
        return tuple(q)
    # loop: q_i = (1 - q_{i+1}) / a_i is affine in q_1 = x; close the cycle
    slope, const = Fraction(1), Fraction(0)      # q_{i} = slope*x + const, start at i = k+1 = 1
    for i in reversed(range(k)):
        slope, const = -slope / exps[i], (1 - const) / exps[i]
    x = const / (1 - slope)
    q = [x]
    for i in range(k - 1):
        q.append(1 - exps[i] * q[i])
    return tuple(q)


# shapes of three-variable invertible polynomials: lists of (kind, size)
_SHAPES = [
    [("Fermat", 1)] * 3,
    [("Chain", 2), ("Fermat", 1)],
    [("Loop", 2), ("Fermat", 1)],
    [("Chain", 3)],
    [("Loop", 3)],
]


def cy3_census(max_exponent=30):
    """All invertible W(x1,x2,x3) with sum q = 1, deduplicated up to variable permutation."""
    found = {}
    rng = range(2, max_exponent + 1)
    for shape in _SHAPES:
        sizes = [s for _, s in shape]
        for exps in product(rng, repeat=sum(sizes)):
            pos = 0
            weights = []
            atoms = []
            ok = True
            for kind, size in shape:
                e = exps[pos:pos + size]
                w = _atom_weights(kind, e)
                if any(x <= 0 or x > Fraction(1, 2) for x in w):
                    ok = False
                    break
                atoms.append(Atom(kind, e, tuple(range(pos, pos + size))))
                weights.extend(w)
                pos += size
            if not ok or sum(weights, Fraction(0)) != 1:
                continue
            W = assemble_atoms(atoms, 3)
            key = canonical_form(W)
            found.setdefault(key, W)
    return found


def check_cy3_census(max_exponent=30):
    found = cy3_census(max_exponent)
    table_keys = {}
    for q, polys in CY3_TABLE.items():
        for p in polys:
            table_keys[canonical_form(parse_polynomial(p))] = (q, p)
    found_keys = set(found)
    grouped = {}
    for key, W in found.items():
        grouped.setdefault(tuple(str(x) for x in key[0]), []).append(str(W))
    e8 = (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
    e8_chains = [str(W) for key, W in found.items() if key[0] == e8 and _is_single_chain(W)]
    return {
        "found": len(found_keys),
        "table": len(table_keys),
        "missing_from_census": [table_keys[k][1] for k in table_keys if k not in found_keys],
        "missing_from_table": [str(found[k]) for k in found_keys if k not in table_keys],
        "groups": {k: sorted(v) for k, v in sorted(grouped.items())},
        "weight_groups_match": all(k[0] in CY3_TABLE for k in found_keys),
        "e8_chain_cell_empty": not e8_chains,
        "holds": found_keys == set(table_keys) and not e8_chains
        and all(k[0] in CY3_TABLE for k in found_keys),
    }


def _is_single_chain(W):
    from .poly_core import classify_invertible
    atoms = classify_invertible(W)
    return len(atoms) == 1 and atoms[0].kind == "Chain"


# ---------------------------------------------------------------- rank census

RANK_CENSUS = [
    ("x1^3+x2^3+x3^3", "J", 4),
    ("x1^4+x2^4", "J", 6),
    ("x1^3+x2^3+x3^3", "max", 8),
    ("x1^4+x2^4+x3^2", "max", 9),
    ("x1^6+x2^3+x3^2", "max", 10),
]


def check_rank_census():
    rows = []
    for p, g, expected in RANK_CENSUS:
        W = parse_polynomial(p)
        S = build_state_space(W, resolve_group_spec(g, W), with_pairing=False)
        rows.append({"poly": p, "group": g, "rank": S.rank, "expected": expected})
    return {"rows": rows, "holds": all(r["rank"] == r["expected"] for r in rows)}


# ---------------------------------------------------------------- degree criterion

def degree_criterion(W, G):
    """Every element outside the J-sector has deg_C >= 1; age-1 sectors with N <= 1 reduce to J."""
    q = weight_system(W)
    chat = central_charge(q)
    if not is_calabi_yau(W) or chat < 3:
        raise PreconditionNotMet(f"needs a Calabi-Yau W with chat >= 3 (chat = {chat})")
    if not all(is_special_linear(g) for g in G.generators):
        raise PreconditionNotMet("the group is not contained in SL")
    S = build_state_space(W, G, with_pairing=False)
    J = S.J
    low = [e.label() for e in S.basis if e.gamma != J and e.deg_c < 1]
    E = exponent_matrix(W)
    n = W.nvars
    ones = [Fraction(1)] * n
    narrow_age_one, broad_age_one, bad = [], [], []
    occupied = {e.gamma for e in S.basis}
    for g in G:
        sd = sector_data(g, q)
        if sd.age != 1:
            continue
        if sd.n_gamma == 0:
            Eg = [sum((E[i][j] * g[j] for j in range(n)), Fraction(0)) for i in range(n)]
            narrow_age_one.append(str(g))
            if Eg != ones or g != J:
                bad.append(str(g))
        elif sd.n_gamma == 1:
            broad_age_one.append(str(g))
            if g in occupied:
                bad.append(str(g))
    return {
        "rank": S.rank,
        "elements_below_one": low,
        "age_one_narrow": narrow_age_one,
        "age_one_single_fixed": broad_age_one,
        "exceptions": bad,
        "holds": not low and not bad and narrow_age_one == [str(J)],
    }


# ---------------------------------------------------------------- elliptic checks

# cubic/<J> basis position -> elliptic label (t^0, t^1, s^0, s^1)
def _psi(S):
    from .virasoro_ops import S0, S1, T0, T1
    mapping = {}
    for idx, e in enumerate(S.basis):
        if e.gamma == S.J:
            mapping[idx] = T0
        elif not e.gamma.is_identity():
            mapping[idx] = T1
        elif e.mu_plus > 0:
            mapping[idx] = S0
        else:
            mapping[idx] = S1
    return mapping


def elliptic_checks(kmax=3, M=8, q_symbol=None):
    from .quantization import (LoopOperator, conjugate, connection_operator, is_infinitesimal_symplectic,
                               loop_commutator, quadratic_hamiltonian, quantize)
    from .virasoro_ops import (DiffOperator, ELLIPTIC_PARITY, T0, T1, commutator, elliptic_operator,
                               extra_operators, space_parity, virasoro_operator)
    qs = q_symbol if q_symbol is not None else sympy.Symbol("q")
    W = parse_polynomial("x1^3+x2^3+x3^3")
    S = build_state_space(W, resolve_group_spec("J", W))
    psi = _psi(S)
    ident = []
    for k in range(-1, kmax + 1):
        diff = virasoro_operator(S, k, M).relabel(psi) - elliptic_operator(k, M)
        ident.append({"k": k, "holds": diff.is_zero(), "defect": diff.dump()})

    # log S: the single entry q/z sending 1|J> to 1|J^2>
    n = S.rank
    one = next(a for a, b in psi.items() if b == T0)
    omega = next(a for a, b in psi.items() if b == T1)
    N = [[Fraction(0)] * n for _ in range(n)]
    N[omega][one] = qs
    log_S = LoopOperator(n, {(-1, 0): N})
    A = connection_operator(S)
    conj, const = conjugate(log_S, A, S)
    conj_ok = (conj - A).is_zero() and loop_commutator(log_S, A).is_zero()

    h = quadratic_hamiltonian(log_S, S, M)
    literal = quantize(h, space_parity(S), M, literal=True).relabel(psi)
    shown = DiffOperator(ELLIPTIC_PARITY, M=M)
    shown.add_term(-qs / 2, creators=[(0, T0), (0, T0)], hbar=-2)
    for k in range(M):
        shown.add_term(-qs, creators=[(k + 1, T0)], annihilators=[(k, T1)])
    display_ok = (literal - shown).is_zero()

    logS_hat = quantize(h, space_parity(S), M).relabel(psi)
    swapped = logS_hat.relabel({T0: T1, T1: T0, 2: 2, 3: 3})
    brackets, control = [], []
    for k in range(-1, kmax + 1):
        D, Db = extra_operators(k, M)
        limit = M - abs(k) - 1
        zero = all(commutator(logS_hat, X).window(limit).is_zero() for X in (D, Db))
        brackets.append({"k": k, "holds": zero})
        control.append(not all(commutator(swapped, X).window(limit).is_zero() for X in (D, Db)))
    return {
        "identification": ident,
        "identification_holds": all(r["holds"] for r in ident),
        "log_S_symplectic": is_infinitesimal_symplectic(log_S, S.eta),
        "conjugation_invariant": conj_ok,
        "conjugation_constant": None if const is None else str(const),
        "log_S_matches_display": display_ok,
        "D_brackets": brackets,
        "D_brackets_vanish": all(r["holds"] for r in brackets),
        "negative_control_breaks": any(control),
        "holds": all(r["holds"] for r in ident) and conj_ok and display_ok
        and all(r["holds"] for r in brackets) and any(control),
    }


def cy_pairs():
    """(label, W, G) for every CY-3 table entry with <J> and with G_W."""
    out = []
    for polys in CY3_TABLE.values():
        for p in polys:
            W = parse_polynomial(p)
            out.append((f"{p} / J", W, resolve_group_spec("J", W)))
            out.append((f"{p} / max", W, maximal_group(W)))
    return out
