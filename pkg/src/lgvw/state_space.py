"""State spaces H_{W,G}: sectors, gradings, pairing and Poincare series."""
from fractions import Fraction
from math import lcm

from . import linalg
from .errors import DegenerateResidue, DegenerateRestriction, NonIsolatedSingularity, NotAdmissible
from .jacobian import jacobian_algebra
from .poly_core import central_charge, weight_system
from .symmetry import PhaseVector, is_admissible, sector_data


class SectorElement:
    def __init__(self, sector, monomial, q, chat):
        self.sector = sector
        self.gamma = sector.gamma
        self.monomial = tuple(monomial)
        fix = sector.fixed_indices
        self.wt = sum(((m + 1) * q[i] for m, i in zip(self.monomial, fix)), Fraction(0))
        self.mu_plus = self.wt + sector.iota - chat / 2
        self.mu_minus = sector.n_gamma - self.wt + sector.iota - chat / 2
        self.parity = -1 if sector.n_gamma % 2 else 1
        self.deg_c = (self.mu_plus + self.mu_minus + chat) / 2

    @property
    def is_odd(self):
        return self.parity == -1

    def label(self):
        fix = self.sector.fixed_indices
        parts = []
        for m, i in zip(self.monomial, fix):
            if m == 1:
                parts.append(f"x{i + 1}")
            elif m > 1:
                parts.append(f"x{i + 1}^{m}")
        form = "".join(f"dx{i + 1}" for i in fix)
        body = "*".join(parts)
        if body and form:
            body = body + " " + form
        else:
            body = body or form or "1"
        return f"{body}|{self.gamma}>"

    def row(self):
        return {
            "sector": str(self.gamma),
            "element": self.label(),
            "wt": str(self.wt),
            "mu_plus": str(self.mu_plus),
            "mu_minus": str(self.mu_minus),
            "parity": "+" if self.parity == 1 else "-",
            "deg_c": str(self.deg_c),
        }

    def __repr__(self):
        return f"SectorElement({self.label()}, mu=({self.mu_plus},{self.mu_minus}))"


def _sector_order(J, ident):
    def key(g):
        return (g != J, g == ident, g)
    return key


def invariant_monomials(alg, sector, generators):
    fix = sector.fixed_indices
    out = []
    for m in alg.standard:
        if all(sum(((e + 1) * g[i] for e, i in zip(m, fix)), Fraction(0)).denominator == 1
               for g in generators):
            out.append(m)
    return out


class StateSpace:
    def __init__(self, W, G, with_pairing=True):
        self.W = W
        self.G = G
        if not is_admissible(G, W):
            raise NotAdmissible(f"J is not in the group {G}")
        self.q = q = weight_system(W)
        self.chat = chat = central_charge(q)
        self.J = PhaseVector(q)
        ident = PhaseVector([0] * W.nvars)
        self.basis = []
        self.algebras = {}
        for gamma in sorted(G, key=_sector_order(self.J, ident)):
            sd = sector_data(gamma, q)
            alg = self._algebra(sd)
            for m in invariant_monomials(alg, sd, G.generators):
                self.basis.append(SectorElement(sd, m, q, chat))
        self.rank = len(self.basis)
        self.eta = None
        self.eta_inv = None
        if with_pairing:
            self._build_pairing()

    def _algebra(self, sd):
        fix = sd.fixed_indices
        if fix not in self.algebras:
            Wg = self.W.restrict(fix)
            try:
                self.algebras[fix] = jacobian_algebra(Wg, tuple(self.q[i] for i in fix))
            except (NonIsolatedSingularity, DegenerateResidue) as exc:
                raise DegenerateRestriction(f"restriction of {self.W} to {fix}: {exc}") from None
        return self.algebras[fix]

    def _build_pairing(self):
        n = self.rank
        eta = linalg.zeros(n)
        by_sector = {}
        for idx, e in enumerate(self.basis):
            by_sector.setdefault(e.gamma, []).append(idx)
        for gamma, rows in by_sector.items():
            cols = by_sector.get(-gamma, [])
            alg = self.algebras[self.basis[rows[0]].sector.fixed_indices]
            for a in rows:
                for b in cols:
                    eta[a][b] = alg.pair_monomials(self.basis[a].monomial, self.basis[b].monomial)
        inv = linalg.zeros(n)
        done = set()
        for gamma, rows in by_sector.items():
            if gamma in done:
                continue
            idx = sorted(set(rows) | set(by_sector.get(-gamma, [])))
            done.update({gamma, -gamma})
            sub = [[eta[a][b] for b in idx] for a in idx]
            try:
                subinv = linalg.inverse(sub)
            except ZeroDivisionError:
                raise DegenerateResidue(f"pairing is degenerate on sectors {gamma}, {-gamma}") from None
            for i, a in enumerate(idx):
                for j, b in enumerate(idx):
                    inv[a][b] = subinv[i][j]
        self.eta = eta
        self.eta_inv = inv

    def index_of_identity(self):
        for i, e in enumerate(self.basis):
            if e.gamma == self.J and not e.monomial:
                return i
        raise LookupError("1|J> missing from the basis")

    def rows(self):
        return [e.row() for e in self.basis]


def build_state_space(W, G, with_pairing=True):
    return StateSpace(W, G, with_pairing)


def euler_characteristic(S):
    return sum(e.parity for e in S.basis)


def supertrace_theta(S):
    return sum((e.parity * (e.mu_plus - Fraction(1, 2)) * (e.mu_plus + Fraction(1, 2)) for e in S.basis),
               Fraction(0))


def supertrace_theta_squared(S):
    return sum((e.parity * e.mu_plus ** 2 for e in S.basis), Fraction(0))


def check_supertrace_formula(S):
    lhs = supertrace_theta(S)
    chi = euler_characteristic(S)
    rhs = (S.chat - 3) / 12 * chi
    return {"lhs": lhs, "rhs": rhs, "chi": chi, "chat": S.chat, "holds": lhs == rhs}


# ---------------------------------------------------------------- Poincare series

class GradedSeries:
    """Finite sum of c * y^e with rational exponents e."""

    def __init__(self, terms=None):
        self.terms = {Fraction(e): c for e, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return GradedSeries(out)

    def shift(self, e):
        return GradedSeries({k + e: c for k, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return GradedSeries(out)

    def __eq__(self, other):
        return isinstance(other, GradedSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def denominator(self):
        return lcm(1, *(e.denominator for e in self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*y^({e})" for e, c in sorted(self.terms.items()))

    def __repr__(self):
        return f"GradedSeries({self})"


def _poly_divide_exact(num, den):
    """Exact quotient of integer coefficient lists (index = power); den[0] == 1."""
    num = list(num)
    qlen = len(num) - len(den) + 1
    if qlen <= 0:
        if any(num):
            raise ArithmeticError("division leaves a remainder")
        return [0]
    quo = [0] * qlen
    for k in range(qlen):
        c = num[k]
        quo[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num):
        raise ArithmeticError("division leaves a remainder")
    return quo


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poincare_series_product(W_restricted, weights=None):
    """prod_i (y - y^{q_i}) / (1 - y^{q_i}), simplified exactly in u = y^{1/D}."""
    n = W_restricted.nvars
    if n == 0:
        return GradedSeries({0: 1})
    q = tuple(weights) if weights is not None else tuple(weight_system(W_restricted))
    D = lcm(*(w.denominator for w in q))
    exps = [int(w * D) for w in q]
    # (u^D - u^e) = -u^e (1 - u^{D-e})
    num = [1]
    den = [1]
    for e in exps:
        f = [0] * (D - e + 1)
        f[0], f[D - e] = 1, -1
        num = _poly_mul(num, f)
        g = [0] * (e + 1)
        g[0], g[e] = 1, -1
        den = _poly_mul(den, g)
    quo = _poly_divide_exact(num, den)
    sign = (-1) ** n
    shift = sum(exps)
    return GradedSeries({Fraction(shift + k, D): sign * c for k, c in enumerate(quo) if c})


def averaged_sector_series(fixed, q, generators):
    """G-averaged series of Jac(W_gamma) dx_gamma over the fixed indices.

    Each factor (y - lam y^q)/(1 - lam y^q) is expanded as a power series in
    y; a term lam_1^{k_1}...lam_N^{k_N} averages over G to 1 if the character
    sum_i k_i theta_i(g) is integral for every generator and to 0 otherwise.
    Exponents beyond N_gamma cannot occur in the result, so truncating there
    is exact; the truncated tail is checked to vanish.
    """
    N = len(fixed)
    if N == 0:
        return GradedSeries({0: 1})
    bound = Fraction(N + 1)
    gens = [tuple(g[i] for i in fixed) for g in generators]
    zero_char = tuple(Fraction(0) for _ in gens)
    acc = {(Fraction(0), zero_char): 1}
    for pos in range(N):
        qi = q[pos]
        factor = []
        k = 0
        while k * qi + 1 <= bound:
            factor.append((1 + k * qi, k, 1))
            k += 1
        k = 1
        while k * qi <= bound:
            factor.append((k * qi, k, -1))
            k += 1
        nxt = {}
        for (e, ch), c in acc.items():
            for fe, fk, fc in factor:
                ee = e + fe
                if ee > bound:
                    continue
                nch = tuple((x + fk * g[pos]) % 1 for x, g in zip(ch, gens))
                key = (ee, nch)
                nxt[key] = nxt.get(key, 0) + c * fc
        acc = nxt
    out = {}
    for (e, ch), c in acc.items():
        if ch == zero_char and c:
            out[e] = out.get(e, 0) + c
    result = GradedSeries(out)
    top = sum((1 - w for w in q), Fraction(0))
    if any(e > top for e in result.terms):
        raise ArithmeticError("averaged series has terms above the socle weight")
    return result


def poincare_series_pair(S):
    """sum over sectors of y^{iota - chat/2} times the G-averaged sector series."""
    total = GradedSeries()
    for gamma in S.G:
        sd = sector_data(gamma, S.q)
        fix = sd.fixed_indices
        part = averaged_sector_series(fix, tuple(S.q[i] for i in fix), S.G.generators)
        total = total + part.shift(sd.iota - S.chat / 2)
    return total


def census_series(S):
    out = {}
    for e in S.basis:
        out[e.mu_plus] = out.get(e.mu_plus, 0) + e.parity
    return GradedSeries(out)


def jacobian_census_series(alg):
    sign = (-1) ** alg.nvars
    out = {}
    for m in alg.standard:
        w = alg.weight(m) + sum(alg.q, Fraction(0))
        out[w] = out.get(w, 0) + sign
    return GradedSeries(out)


def series_limits(P):
    chi = sum(P.terms.values())
    str2 = sum((c * e * e for e, c in P.terms.items()), Fraction(0))
    return chi, str2


def check_poincare(S):
    """Three routes to the same graded count plus the y -> 1 limits."""
    sector_ok = True
    for fix, alg in S.algebras.items():
        q = alg.q
        prod_route = poincare_series_product(alg.W, q)
        census = jacobian_census_series(alg)
        trivial = averaged_sector_series(fix, q, [])
        if not (prod_route == census == trivial):
            sector_ok = False
    pair = poincare_series_pair(S)
    census = census_series(S)
    chi, str2 = series_limits(pair)
    chi_direct = euler_characteristic(S)
    str2_direct = supertrace_theta(S) + Fraction(chi_direct, 4)
    return {
        "sector_routes_agree": sector_ok,
        "pair_equals_census": pair == census,
        "chi": chi,
        "chi_direct": chi_direct,
        "str_theta2": str2,
        "str_theta2_direct": str2_direct,
        "holds": sector_ok and pair == census and chi == chi_direct and str2 == str2_direct,
        "series": pair,
    }
