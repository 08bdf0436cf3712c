"""Truncated super-Weyl algebra in the variables t_m^a and the Virasoro operators.

A term is stored in normal order: creators t_m^a (sorted) to the left of
annihilators d/dt_m^a (sorted), times hbar^p and a power of hbar d/dhbar
standing at the far right.  Odd symbols anticommute; every sign comes from
reordering them.  Coefficients are Fractions, or sympy expressions when a
formal parameter is present.
"""
from fractions import Fraction

from .errors import TruncationTooSmall

HALF = Fraction(1, 2)


def pochhammer(l, n):
    if n < 0:
        raise ValueError("Pochhammer length must be non-negative")
    out = Fraction(1) if isinstance(l, (int, Fraction)) else 1
    for j in range(n):
        out = out * (l + j)
    return out


def _clean(c):
    if isinstance(c, (int, Fraction)):
        return c
    import sympy
    c = sympy.expand(c)
    if c.is_Rational:
        return Fraction(int(c.p), int(c.q))
    return c


def _is_zero(c):
    return c == 0


def _merge(left, right, parity):
    """Sort the product left*right of two sorted symbol tuples.

    Returns (sign, merged) or (0, None) when an odd symbol repeats.
    """
    if not left:
        return 1, right
    if not right:
        return 1, left
    sign = 1
    odd_left = [x for x in left if parity[x[1]]]
    if odd_left:
        for r in right:
            if parity[r[1]]:
                for l in odd_left:
                    if l == r:
                        return 0, None
                    if l > r:
                        sign = -sign
    return sign, tuple(sorted(left + right))


def _odd_count(symbols, parity):
    return sum(parity[x[1]] for x in symbols)


class DiffOperator:
    """Finite sum of normal-ordered super-Weyl monomials."""

    def __init__(self, parity, terms=None, M=None):
        self.parity = tuple(parity)
        self.M = M
        self.terms = {}
        for key, c in (terms or {}).items():
            self._add(key, c)

    # -- construction helpers
    def _add(self, key, c):
        c = _clean(self.terms.get(key, 0) + c)
        if _is_zero(c):
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def copy(self):
        out = DiffOperator(self.parity, M=self.M)
        out.terms = dict(self.terms)
        return out

    def add_term(self, coeff, creators=(), annihilators=(), hbar=0, hd=0):
        """Add coeff * hbar^p * t[creators...] * d[annihilators...] given in written order."""
        s1, cr = _sort_word(tuple(creators), self.parity)
        s2, an = _sort_word(tuple(annihilators), self.parity)
        if s1 == 0 or s2 == 0:
            return self
        self._add((cr, an, hbar, hd), coeff * s1 * s2)
        return self

    @classmethod
    def scalar(cls, parity, c, M=None):
        out = cls(parity, M=M)
        if c != 0:
            out._add(((), (), 0, 0), c)
        return out

    # -- linear structure
    def __add__(self, other):
        out = self.copy()
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    def __neg__(self):
        out = DiffOperator(self.parity, M=self.M)
        out.terms = {k: _clean(-c) for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = DiffOperator(self.parity, M=self.M)
        for k, v in self.terms.items():
            out._add(k, v * c)
        return out

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def constant(self):
        return self.terms.get(((), (), 0, 0), Fraction(0))

    def max_index(self, key):
        cr, an, _, _ = key
        return max((x[0] for x in cr + an), default=-1)

    def window(self, limit):
        """Drop every term touching a level index above `limit`."""
        out = DiffOperator(self.parity, M=self.M)
        out.terms = {k: c for k, c in self.terms.items() if self.max_index(k) <= limit}
        return out

    def grade(self):
        """Parity of the operator (0 even, 1 odd); raises if mixed."""
        parities = {(_odd_count(cr, self.parity) + _odd_count(an, self.parity)) % 2
                    for cr, an, _, _ in self.terms}
        if len(parities) > 1:
            raise ValueError("operator mixes even and odd terms")
        return parities.pop() if parities else 0

    def hbar_powers(self):
        return sorted({k[2] for k in self.terms})

    def substitute_shift(self, var, value):
        """Replace the creator t_var by (t_var + value) everywhere (var must be even)."""
        if self.parity[var[1]]:
            raise ValueError("shift of an odd variable")
        out = DiffOperator(self.parity, M=self.M)
        for (cr, an, hp, hd), c in self.terms.items():
            r = cr.count(var)
            rest = tuple(x for x in cr if x != var)
            binom = 1
            for j in range(r + 1):
                # choose j copies of t_var to keep
                keep = rest + (var,) * j
                coeff = c * binom * value ** (r - j)
                out._add((tuple(sorted(keep)), an, hp, hd), coeff)
                binom = binom * (r - j) // (j + 1)
        return out

    def relabel(self, mapping):
        """Rename basis labels a -> mapping[a] (parities must match)."""
        parity = [0] * len(self.parity)
        for a, b in mapping.items():
            parity[b] = self.parity[a]
        out = DiffOperator(parity, M=self.M)
        for (cr, an, hp, hd), c in self.terms.items():
            new_cr = [(m, mapping[a]) for m, a in cr]
            new_an = [(m, mapping[a]) for m, a in an]
            s1, cr2 = _sort_word(tuple(new_cr), parity)
            s2, an2 = _sort_word(tuple(new_an), parity)
            out._add((cr2, an2, hp, hd), c * s1 * s2)
        return out

    # -- multiplication
    def __mul__(self, other):
        if not isinstance(other, DiffOperator):
            return self.scale(other)
        out = DiffOperator(self.parity, M=self.M)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for key, c in _mono_product(k1, k2, self.parity):
                    out._add(key, c1 * c2 * c)
        return out

    def dump(self):
        lines = []
        for (cr, an, hp, hd), c in sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0])):
            parts = [str(c)]
            if hp:
                parts.append(f"hbar^{hp}")
            parts += [f"t[{m},{a}]" for m, a in cr]
            parts += [f"d[{m},{a}]" for m, a in an]
            if hd:
                parts.append(f"hdh^{hd}")
            lines.append(" * ".join(parts))
        return "\n".join(lines)

    def __str__(self):
        return self.dump() or "0"

    def __repr__(self):
        return f"DiffOperator({len(self.terms)} terms)"


def _sort_key(key):
    cr, an, hp, hd = key
    return (len(cr) + len(an), cr, an, hp, hd)


def _sort_word(word, parity):
    """Sort a written product of symbols; returns (sign, sorted tuple)."""
    sign = 1
    w = list(word)
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            if parity[w[j][1]] and parity[w[j - 1][1]]:
                sign = -sign
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for i in range(1, len(w)):
        if w[i] == w[i - 1] and parity[w[i][1]]:
            return 0, ()
    return sign, tuple(w)


def _apply_derivative(y, creators, parity):
    """Super-derivative of the creator word by d/dt_y, as list of (coeff, word)."""
    out = []
    odd_y = parity[y[1]]
    seen_odd = 0
    count = 0
    for i, x in enumerate(creators):
        if x == y:
            if odd_y:
                sign = -1 if seen_odd % 2 else 1
                out.append((sign, creators[:i] + creators[i + 1:]))
                return out
            count += 1
        if parity[x[1]]:
            seen_odd += 1
    if count:
        i = creators.index(y)
        out.append((count, creators[:i] + creators[i + 1:]))
    return out


def _normal_order_derivs_creators(derivs, creators, parity):
    """Normal order d_{y1}...d_{yk} * t_{creators}; returns dict (cr, an) -> coeff."""
    state = {(creators, ()): 1}
    for y in reversed(derivs):
        new = {}
        odd_y = parity[y[1]]
        for (cr, an), c in state.items():
            for dc, rest in _apply_derivative(y, cr, parity):
                key = (rest, an)
                new[key] = new.get(key, 0) + c * dc
            pass_sign = -1 if (odd_y and _odd_count(cr, parity) % 2) else 1
            s, merged = _merge((y,), an, parity)
            if s:
                key = (cr, merged)
                new[key] = new.get(key, 0) + c * pass_sign * s
        state = {k: v for k, v in new.items() if v}
    return state


def _mono_product(k1, k2, parity):
    cr1, an1, hp1, hd1 = k1
    cr2, an2, hp2, hd2 = k2
    # move (hbar d/dhbar)^hd1 past the second factor: (hD)^e X = X (hD + hp2)^e
    hd_terms = _binomial_shift(hd1, hp2)
    out = []
    middle = _normal_order_derivs_creators(an1, cr2, parity)
    for (cr, an), c in middle.items():
        s1, crm = _merge(cr1, cr, parity)
        if not s1:
            continue
        s2, anm = _merge(an, an2, parity)
        if not s2:
            continue
        for e, bc in hd_terms:
            out.append(((crm, anm, hp1 + hp2, e + hd2), c * s1 * s2 * bc))
    return out


def _binomial_shift(e, p):
    """(D + p)^e = sum_j binom(e, j) p^(e-j) D^j."""
    out = []
    binom = 1
    for j in range(e + 1):
        coeff = binom * p ** (e - j)
        if coeff:
            out.append((j, coeff))
        binom = binom * (e - j) // (j + 1)
    return out


def commutator(A, B):
    """Super-commutator AB - (-1)^{|A||B|} BA."""
    if A.grade() and B.grade():
        return A * B + B * A
    return A * B - B * A


# ---------------------------------------------------------------- Virasoro operators

def space_parity(S):
    return tuple(1 if e.is_odd else 0 for e in S.basis)


def virasoro_operator(S, k, M, str_constant=None, literal_hbar_term=False):
    """L_k on the state space S, truncated at level M.

    In the hbar^2 part the Pochhammer factor (mu_a + m + 1/2)_{k+1} goes with
    the derivative at level m + k, i.e. eta^{ab} d/dt^b_{-m-1} d/dt^a_{m+k}.
    `literal_hbar_term=True` attaches it to the level -m-1 derivative instead;
    that variant breaks the Virasoro relations as soon as eta pairs classes
    with mu != 0 and is kept only as a control.  `str_constant` overrides the
    k = 0 constant.
    """
    if k < -1:
        raise ValueError("k must be at least -1")
    if M < k + 1:
        raise TruncationTooSmall(f"truncation {M} is below k + 1 = {k + 1}")
    par = space_parity(S)
    L = DiffOperator(par, M=M)
    n = S.rank
    chat = S.chat
    one = S.index_of_identity()
    lead = pochhammer((3 - chat) / 2, k + 1)
    L.add_term(-lead, annihilators=[(k + 1, one)])
    for a, e in enumerate(S.basis):
        for m in range(0, M + 1):
            if m + k < 0 or m + k > M:
                continue
            c = pochhammer(e.mu_plus + m + HALF, k + 1)
            if c:
                L.add_term(c, creators=[(m, a)], annihilators=[(m + k, a)])
    for m in range(-k, 0):
        sign = (-1) ** (-m)
        for a, e in enumerate(S.basis):
            c = pochhammer(e.mu_plus + m + HALF, k + 1)
            if not c:
                continue
            for b in range(n):
                eab = S.eta_inv[a][b]
                if not eab:
                    continue
                if literal_hbar_term:
                    pair = [(-m - 1, a), (m + k, b)]
                else:
                    pair = [(-m - 1, b), (m + k, a)]
                L.add_term(HALF * sign * c * eab, annihilators=pair, hbar=2)
    if k == -1:
        for a in range(n):
            for b in range(n):
                eab = S.eta[b][a]
                if eab:
                    L.add_term(HALF * eab, creators=[(0, a), (0, b)], hbar=-2)
    if k == 0:
        from .state_space import supertrace_theta
        const = supertrace_theta(S) if str_constant is None else str_constant
        L = L + DiffOperator.scalar(par, -const / 4, M)
    return L


def check_virasoro_relations(S, kmax, M, operators=None):
    """Check [L_m, L_n] = (m - n) L_{m+n} on the boundary-guarded window."""
    if M < 2 * kmax + 2 and operators is None:
        raise TruncationTooSmall(f"need M >= 2*kmax + 2 = {2 * kmax + 2}")
    ops = operators or {}
    for k in range(-1, 2 * kmax + 1):
        if k not in ops:
            ops[k] = virasoro_operator(S, k, M)
    results = []
    for m in range(-1, kmax + 1):
        for n in range(m + 1, kmax + 1):
            limit = M - (abs(m) + abs(n))
            lhs = commutator(ops[m], ops[n]).window(limit)
            rhs = ops[m + n].scale(m - n).window(limit)
            diff = lhs - rhs
            results.append({"m": m, "n": n, "holds": diff.is_zero(), "defect": diff.dump()})
    return {"holds": all(r["holds"] for r in results), "relations": results}


def grading_operator(S, M):
    par = space_parity(S)
    E = DiffOperator(par, M=M)
    for a, e in enumerate(S.basis):
        for m in range(M + 1):
            c = m - 1 + e.mu_plus + S.chat / 2
            if c:
                E.add_term(c, creators=[(m, a)], annihilators=[(m, a)])
    return E


def string_dilaton_operators(S, M):
    from .state_space import euler_characteristic
    par = space_parity(S)
    string = virasoro_operator(S, -1, M)
    dil = DiffOperator(par, M=M)
    one = S.index_of_identity()
    dil.add_term(-1, annihilators=[(1, one)])
    for a in range(S.rank):
        for m in range(M + 1):
            dil.add_term(1, creators=[(m, a)], annihilators=[(m, a)])
    dil.add_term(1, hd=1)
    dil = dil + DiffOperator.scalar(par, Fraction(euler_characteristic(S), 24), M)
    return string, dil


def hbar_grading(par, M=None):
    return DiffOperator(par, M=M).add_term(1, hd=1)


def check_grading_identity(S, M):
    """L_0 = E~ + (3 - chat)/2 (dilaton - hbar d/dhbar), exact."""
    L0 = virasoro_operator(S, 0, M)
    E = grading_operator(S, M)
    _, dil = string_dilaton_operators(S, M)
    par = space_parity(S)
    rhs = E + (dil - hbar_grading(par, M)).scale((3 - S.chat) / 2)
    return {"holds": (L0 - rhs).is_zero(), "defect": (L0 - rhs).dump()}


# ---------------------------------------------------------------- elliptic operators

# labels for the rank-4 elliptic space: t^0, t^1 even; s^0, s^1 odd
T0, T1, S0, S1 = 0, 1, 2, 3
ELLIPTIC_PARITY = (0, 0, 1, 1)


def elliptic_operator(k, M):
    """L_k^E in the variables t^0, t^1, s^0, s^1, with the k = -1 quadratic term."""
    if M < k + 1:
        raise TruncationTooSmall(f"truncation {M} is below k + 1 = {k + 1}")
    L = DiffOperator(ELLIPTIC_PARITY, M=M)
    fact = pochhammer(Fraction(1), k + 1)
    L.add_term(-fact, annihilators=[(k + 1, T0)])
    for l in range(M + 1):
        if l + k < 0 or l + k > M:
            continue
        for lab, base in ((T0, 0), (T1, 1), (S0, 1), (S1, 0)):
            c = pochhammer(Fraction(l + base), k + 1)
            if c:
                L.add_term(c, creators=[(l, lab)], annihilators=[(l + k, lab)])
    if k == -1:
        L.add_term(1, creators=[(0, T0), (0, T1)], hbar=-2)
    return L


def extra_operators(k, M):
    """The odd operators D_k and D-bar_k."""
    D = DiffOperator(ELLIPTIC_PARITY, M=M)
    Db = DiffOperator(ELLIPTIC_PARITY, M=M)
    fact = pochhammer(Fraction(1), k + 1)
    if k + 1 <= M:
        D.add_term(-fact, annihilators=[(k + 1, S0)])
        Db.add_term(-fact, annihilators=[(k + 1, S1)])
    for l in range(M + 1):
        if l + k < 0 or l + k > M:
            continue
        a = pochhammer(Fraction(l), k + 1)
        b = pochhammer(Fraction(l + 1), k + 1)
        if a:
            D.add_term(a, creators=[(l, T0)], annihilators=[(l + k, S0)])
            Db.add_term(a, creators=[(l, T0)], annihilators=[(l + k, S1)])
        if b:
            D.add_term(b, creators=[(l, S1)], annihilators=[(l + k, T1)])
            Db.add_term(-b, creators=[(l, S0)], annihilators=[(l + k, T1)])
    return D, Db
