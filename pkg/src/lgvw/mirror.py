"""Mirror map from the A-model space of (W, G) to the B-model space of (W^T, G^T).

An A-model element  prod_{i in Fix g} x_i^{a_i} dx_i | g>  is sent to
prod_{j not in Fix g} y_j^{r_j} dy_j | h>  where g = sum_j (r_j + 1) rho-bar_j
(rho-bar_j the j-th column of E^{-1}, r_j >= 0, r_j + 1 = 0 on Fix g) and
h = sum_{i in Fix g} (a_i + 1) rho_i  (rho_i the i-th row of E^{-1}).

Equivalently the sector of one side is the G-character of the other: the
B element y^b dy_h has character E^{-1}(b + 1) = g.  When Fix h is not the
complement of Fix g (broad chain sectors, where h can be trivial) the
monomial formula has no room for the image.  Those elements are matched
block by block: A elements with sector g and image sector h against B
elements of sector h and character g, in basis order (blocks of size > 1
only occur for two-variable loop sectors, where every pairing preserves the
gradings).
"""
from fractions import Fraction
from itertools import product

from . import linalg
from .errors import MapNotWellDefined
from .jacobian import jacobian_algebra
from .poly_core import central_charge, exponent_matrix, transpose, weight_system
from .symmetry import PhaseVector, mirror_group, sector_data
from .state_space import invariant_monomials


class BModelElement:
    def __init__(self, sector, monomial, q, chat, inverse_iota):
        self.sector = sector
        self.gamma = sector.gamma
        self.monomial = tuple(monomial)
        fix = sector.fixed_indices
        self.wt = sum(((m + 1) * q[i] for m, i in zip(self.monomial, fix)), Fraction(0))
        self.mu_plus_B = self.wt + sector.iota - chat / 2
        self.mu_minus_B = self.wt + inverse_iota - chat / 2
        self.parity_B = -1 if (len(q) - sector.n_gamma) % 2 else 1

    def key(self):
        return (self.gamma, self.monomial)

    def label(self):
        fix = self.sector.fixed_indices
        parts = []
        for m, i in zip(self.monomial, fix):
            if m == 1:
                parts.append(f"y{i + 1}")
            elif m > 1:
                parts.append(f"y{i + 1}^{m}")
        form = "".join(f"dy{i + 1}" for i in fix)
        body = "*".join(parts)
        if body and form:
            body = body + " " + form
        else:
            body = body or form or "1"
        return f"{body}|{self.gamma}>"

    def __repr__(self):
        return f"BModelElement({self.label()})"


class BModelSpace:
    """Sectors h in G^T with G^T-invariant classes of Jac(W^T_h) dy_h."""

    def __init__(self, WT, GT):
        self.W = WT
        self.G = GT
        self.q = q = weight_system(WT)
        self.chat = chat = central_charge(q)
        self.algebras = {}
        self.basis = []
        for h in sorted(GT, key=lambda g: (not g.is_identity(), g)):
            sd = sector_data(h, q)
            inv_iota = sector_data(-h, q).iota
            alg = self.algebra(sd.fixed_indices)
            for m in invariant_monomials(alg, sd, GT.generators):
                self.basis.append(BModelElement(sd, m, q, chat, inv_iota))
        self.index = {e.key(): i for i, e in enumerate(self.basis)}
        self.rank = len(self.basis)
        self.Einv = linalg.inverse(linalg.transpose(exponent_matrix(WT)))

    def character(self, idx):
        """E^{-1}(b + 1) mod 1 for y^b dy_h, with b padded by zero off Fix h."""
        e = self.basis[idx]
        n = len(self.q)
        v = [0] * n
        for m, i in zip(e.monomial, e.sector.fixed_indices):
            v[i] = m + 1
        return PhaseVector([sum((self.Einv[i][j] * v[j] for j in range(n)), Fraction(0))
                            for i in range(n)])

    def algebra(self, fix):
        if fix not in self.algebras:
            self.algebras[fix] = jacobian_algebra(self.W.restrict(fix), tuple(self.q[i] for i in fix))
        return self.algebras[fix]


class MirrorCorrespondence:
    def __init__(self, space_A, space_B, forward, scalars, dual_group, by_character=()):
        self.space_A = space_A
        self.space_B = space_B
        self.forward = forward          # A index -> B index
        self.scalars = scalars          # A index -> nonzero scalar of the image
        self.dual_group = dual_group
        self.by_character = set(by_character)   # A indices placed by character matching
        self.pair_A = (space_A.W, space_A.G)
        self.pair_B = (space_B.W, space_B.G)

    def table(self):
        rows = []
        for a, b in sorted(self.forward.items()):
            ea, eb = self.space_A.basis[a], self.space_B.basis[b]
            rows.append({
                "A": ea.label(), "B": eb.label(),
                "A_bigrading": [str(ea.mu_plus), str(ea.mu_minus)],
                "B_bigrading": [str(eb.mu_plus_B), str(eb.mu_minus_B)],
                "A_parity": ea.parity, "B_parity": eb.parity_B,
            })
        return rows


def _decompose(theta, E, fixed):
    """Integer m with s = E(theta + m) vanishing on `fixed` and >= 1 elsewhere."""
    n = len(theta)
    best = None
    for m in product(range(-1, 3), repeat=n):
        v = [theta[i] + m[i] for i in range(n)]
        s = [sum((E[j][i] * v[i] for i in range(n)), Fraction(0)) for j in range(n)]
        if any(x.denominator != 1 for x in s):
            raise MapNotWellDefined(f"phase {theta} is not a symmetry of W")
        if all((s[j] == 0) if j in fixed else (s[j] >= 1) for j in range(n)):
            cost = sum(abs(x) for x in m)
            if best is None or cost < best[0]:
                best = (cost, [int(x) for x in s])
    if best is None:
        raise MapNotWellDefined(f"no admissible exponent vector for the sector {theta}")
    return best[1]


def krawitz_map(space_A, dual_group=None):
    """Explicit basis bijection from H_{W,G} to the B-model space of (W^T, G^T)."""
    W = space_A.W
    E = exponent_matrix(W)
    n = W.nvars
    Einv = linalg.inverse(E)
    WT = transpose(W)
    GT = dual_group if dual_group is not None else mirror_group(space_A.G, W)
    space_B = BModelSpace(WT, GT)
    forward, scalars, by_character = {}, {}, []
    blocks = {}
    for idx, e in enumerate(space_A.basis):
        fix = e.sector.fixed_indices
        fixset = set(fix)
        exps = dict(zip(fix, e.monomial))
        # sector h = sum_{i in Fix} (a_i + 1) * row_i(E^{-1})
        h = [Fraction(0)] * n
        for i in fix:
            for j in range(n):
                h[j] += (exps[i] + 1) * Einv[i][j]
        h = PhaseVector(h)
        if h not in GT:
            raise MapNotWellDefined(f"image sector {h} of {e.label()} is not in the dual group")
        hfix = h.fixed_indices()
        if set(hfix) != set(range(n)) - fixset:
            blocks.setdefault((h, e.gamma), []).append(idx)
            continue
        s = _decompose(list(e.gamma), E, fixset)
        mono = tuple(s[j] - 1 for j in hfix)
        alg = space_B.algebra(hfix)
        nf = alg.normal_form({mono: Fraction(1)})
        if len(nf) != 1:
            raise MapNotWellDefined(f"image of {e.label()} is not a multiple of a basis monomial: {nf}")
        (std, c), = nf.items()
        key = (h, std)
        if key not in space_B.index:
            raise MapNotWellDefined(f"image of {e.label()} is not invariant under the dual group")
        forward[idx] = space_B.index[key]
        scalars[idx] = c
    # sector/character blocks: equal dimensions, matched in basis order
    for (h, g), members in sorted(blocks.items()):
        hits = [b for b, eb in enumerate(space_B.basis) if eb.gamma == h and space_B.character(b) == g]
        if len(hits) != len(members):
            raise MapNotWellDefined(
                f"sector {h} with character {g}: {len(hits)} B elements for {len(members)} A elements")
        for a, b in zip(members, hits):
            forward[a] = b
            scalars[a] = Fraction(1)
            by_character.append(a)
    return MirrorCorrespondence(space_A, space_B, forward, scalars, GT, by_character)


def verify_mirror(corr):
    A, B = corr.space_A, corr.space_B
    images = list(corr.forward.values())
    bijective = len(images) == A.rank == B.rank and len(set(images)) == B.rank
    grading = all(
        (A.basis[a].mu_plus, A.basis[a].mu_minus) == (B.basis[b].mu_plus_B, B.basis[b].mu_minus_B)
        for a, b in corr.forward.items())
    parity = all(A.basis[a].parity == B.basis[b].parity_B for a, b in corr.forward.items())
    characters = all(B.character(b) == A.basis[a].gamma for a, b in corr.forward.items())
    chat_equal = A.chat == B.chat
    chi_B = sum(e.parity_B for e in B.basis)
    chi_A = sum(e.parity for e in A.basis)
    str_A = sum((e.parity * e.mu_plus ** 2 for e in A.basis), Fraction(0))
    str_B = sum((e.parity_B * e.mu_plus_B ** 2 for e in B.basis), Fraction(0))
    report = {
        "rank_A": A.rank,
        "rank_B": B.rank,
        "bijective": bijective,
        "bigrading_preserved": grading,
        "parity_preserved": parity,
        "sector_is_character": characters,
        "chat_equal": chat_equal,
        "chi_equal": chi_A == chi_B,
        "str_theta2_equal": str_A == str_B,
        "placed_by_character": len(corr.by_character),
    }
    report["holds"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report
