"""Loop space operators, quadratic Hamiltonians and their quantization.

A loop operator is a finite sum  sum z^k M delta^j  with delta = z d/dz and
matrix coefficients M acting on the state-space basis (column convention:
M[c][a] is the phi_c component of M phi_a).  z-powers may be half-integers
in intermediate steps.  Loop vectors are dicts {power of z: coefficient list}.

Darboux coordinates:  f = sum_l p_{l,a} phi^a (-z)^{-l-1} + sum_m q_m^b phi_b z^m
with phi^a = sum_c eta^{ac} phi_c.
"""
from fractions import Fraction

from .errors import HalfPowerResidue, NonNilpotentWindow, NotSymplectic
from .virasoro_ops import DiffOperator, _clean, space_parity, virasoro_operator

HALF = Fraction(1, 2)


def _zero_matrix(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _matmul(A, B):
    n = len(A)
    out = _zero_matrix(n)
    for i in range(n):
        Ai = A[i]
        for k in range(n):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            row = out[i]
            for j in range(n):
                if Bk[j] != 0:
                    row[j] = row[j] + a * Bk[j]
    return [[_clean(x) for x in r] for r in out]


def _matadd(A, B, c=1):
    return [[_clean(a + c * b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _matscale(A, c):
    return [[_clean(a * c) for a in r] for r in A]


def _is_zero_matrix(A):
    return all(x == 0 for r in A for x in r)


def _matvec(A, v):
    return [_clean(sum((a * x for a, x in zip(r, v) if a != 0 and x != 0), Fraction(0))) for r in A]


class LoopOperator:
    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        for key, M in (terms or {}).items():
            self._add(key, M)

    def _add(self, key, M):
        key = (Fraction(key[0]), int(key[1]))
        cur = self.terms.get(key)
        new = M if cur is None else _matadd(cur, M)
        if _is_zero_matrix(new):
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    @classmethod
    def z_power(cls, n, k, M=None, delta=0):
        return cls(n, {(k, delta): M if M is not None else _identity(n)})

    def __add__(self, other):
        out = LoopOperator(self.n, self.terms)
        for k, M in other.terms.items():
            out._add(k, M)
        return out

    def scale(self, c):
        return LoopOperator(self.n, {k: _matscale(M, c) for k, M in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """(z^k M d^i)(z^l N d^j) = z^{k+l} M N (d + l)^i d^j."""
        out = LoopOperator(self.n)
        for (k, i), M in self.terms.items():
            for (l, j), N in other.terms.items():
                MN = _matmul(M, N)
                if _is_zero_matrix(MN):
                    continue
                binom = 1
                for r in range(i + 1):
                    # term binom(i, r) l^(i-r) d^(r+j)
                    c = binom * l ** (i - r)
                    if c:
                        out._add((k + l, r + j), _matscale(MN, c))
                    binom = binom * (i - r) // (r + 1)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LoopOperator) and self.terms == other.terms

    def apply(self, vec):
        """Action on a loop vector {m: coefficient list}."""
        out = {}
        for (k, j), M in self.terms.items():
            for m, v in vec.items():
                c = Fraction(m) ** j
                if c == 0:
                    continue
                w = _matvec(M, v)
                p = k + m
                if p.denominator != 1:
                    raise HalfPowerResidue(f"half-integer power z^{p} in a loop vector")
                p = int(p)
                cur = out.get(p, [Fraction(0)] * self.n)
                out[p] = [_clean(a + c * b) for a, b in zip(cur, w)]
        return {p: v for p, v in out.items() if any(x != 0 for x in v)}

    def z_powers(self):
        return sorted({k for k, _ in self.terms})

    def __repr__(self):
        return f"LoopOperator({sorted(self.terms)})"


def loop_commutator(A, B):
    return A * B - B * A


def hodge_matrix(S):
    n = S.rank
    M = _zero_matrix(n)
    for a, e in enumerate(S.basis):
        M[a][a] = e.mu_plus
    return M


def auxiliary_D(S):
    """D = z^2 d/dz + z(theta + 1) = z (delta + theta + 1)."""
    n = S.rank
    th = hodge_matrix(S)
    return LoopOperator(n, {(1, 0): _matadd(th, _identity(n)), (1, 1): _identity(n)})


def script_L(S, k):
    """z^{-1/2} D^{k+1} z^{-1/2}, expanded; half powers must cancel."""
    n = S.rank
    zh = LoopOperator.z_power(n, -HALF)
    D = auxiliary_D(S)
    out = zh
    for _ in range(k + 1):
        out = out * D
    out = out * zh
    for p, _ in out.terms:
        if p.denominator != 1:
            raise HalfPowerResidue(f"z^{p} survives in the expansion of the k={k} operator")
    return out


def symplectic_form(eta, f, g):
    """Omega(f, g) = Res_{z=0} (f(-z), g(z)) = sum_{i+j=-1} (-1)^i f_i^T eta g_j."""
    total = Fraction(0)
    for i, fi in f.items():
        gj = g.get(-1 - i)
        if gj is None:
            continue
        s = sum((fi[a] * eta[a][b] * gj[b] for a in range(len(fi)) if fi[a] != 0
                 for b in range(len(gj)) if eta[a][b] != 0 and gj[b] != 0), Fraction(0))
        total = total + (s if i % 2 == 0 else -s)
    return _clean(total)


def _basis_vector(n, a, m):
    v = [Fraction(0)] * n
    v[a] = Fraction(1)
    return {m: v}


def is_infinitesimal_symplectic(A, eta, window=6):
    n = len(eta)
    vecs = [_basis_vector(n, a, m) for a in range(n) for m in range(-window, window + 1)]
    images = [A.apply(v) for v in vecs]
    for f, Af in zip(vecs, images):
        for g, Ag in zip(vecs, images):
            if _clean(symplectic_form(eta, Af, g) + symplectic_form(eta, f, Ag)) != 0:
                return False
    return True


# ---------------------------------------------------------------- Hamiltonians

class QuadraticHamiltonian:
    """Ordered coefficient table h = sum T[X, Y] x_X x_Y over Darboux labels.

    Labels are ('q', m, a) for q_m^a and ('p', l, a) for p_{l,a}.  The table
    keeps both orders (X, Y) and (Y, X) so that odd coordinates can be
    quantized in written order.
    """

    def __init__(self, table):
        self.table = {k: v for k, v in table.items() if v != 0}

    def part(self, kinds):
        return {k: v for k, v in self.table.items() if (k[0][0], k[1][0]) in kinds}

    def symmetric(self):
        """Coefficients of the commuting monomials (unordered label pairs)."""
        out = {}
        for (X, Y), c in self.table.items():
            key = tuple(sorted((X, Y)))
            out[key] = _clean(out.get(key, 0) + c)
        return {k: v for k, v in out.items() if v != 0}

    @property
    def qq(self):
        return {k: v for k, v in self.symmetric().items() if k[0][0] == "q" and k[1][0] == "q"}

    @property
    def pp(self):
        return {k: v for k, v in self.symmetric().items() if k[0][0] == "p" and k[1][0] == "p"}

    @property
    def pq(self):
        return {k: v for k, v in self.symmetric().items() if {k[0][0], k[1][0]} == {"p", "q"}}


def darboux_vector(eta_inv, n, label):
    kind, m, a = label
    if kind == "q":
        return _basis_vector(n, a, m)
    # p_{l,a}: phi^a (-z)^{-l-1}
    sign = -1 if (m + 1) % 2 else 1
    v = [Fraction(sign) * eta_inv[a][c] for c in range(n)]
    return {-m - 1: v}


def quadratic_hamiltonian(A, S, M, check=True):
    """h_A = 1/2 Omega(A f, f) on Darboux coordinates of level <= M."""
    n = S.rank
    eta, eta_inv = S.eta, S.eta_inv
    if check and not is_infinitesimal_symplectic(A, eta, window=min(M, 4) + 2):
        raise NotSymplectic("operator is not infinitesimal symplectic")
    labels = [(kind, m, a) for kind in ("q", "p") for m in range(M + 1) for a in range(n)]
    vecs = {X: darboux_vector(eta_inv, n, X) for X in labels}
    by_power = {}
    for X, v in vecs.items():
        (p,) = v.keys()
        by_power.setdefault(p, []).append(X)
    table = {}
    for X in labels:
        AX = A.apply(vecs[X])
        for p in AX:
            for Y in by_power.get(-1 - p, []):
                val = symplectic_form(eta, AX, vecs[Y])
                if val != 0:
                    table[(X, Y)] = _clean(table.get((X, Y), 0) + val * HALF)
    return QuadraticHamiltonian(table)


def _variable(label):
    kind, m, a = label
    return (m, a)


def quantize(h, parity, M=None, literal=False):
    """Quantize a quadratic Hamiltonian.

    Literal rules: q_a q_b -> t_a t_b / hbar^2, q_a p_b -> t_a d_b,
    p_a p_b -> hbar^2 d_a d_b (written order kept; p q is read as q p, with
    no sign since eta is symmetric on odd blocks).  The returned operator is the negative of the literal
    one unless `literal` is set; with that sign the quantized 𝓛_k match L_k.
    """
    op = DiffOperator(parity, M=M)
    for (X, Y), c in h.table.items():
        kinds = X[0] + Y[0]
        x, y = _variable(X), _variable(Y)
        if kinds == "qq":
            op.add_term(c, creators=[x, y], hbar=-2)
        elif kinds == "pp":
            op.add_term(c, annihilators=[x, y], hbar=2)
        elif kinds == "qp":
            op.add_term(c, creators=[x], annihilators=[y])
        else:
            op.add_term(c, creators=[y], annihilators=[x])
    return op if literal else -op


def dilaton_shift(op, S):
    """Rewrite an operator in q-variables in terms of t = q + (shift at t_1^0)."""
    one = S.index_of_identity()
    return op.substitute_shift((1, one), Fraction(-1))


def quantized_script_L(S, k, M):
    A = script_L(S, k)
    h = quadratic_hamiltonian(A, S, M, check=False)
    return quantize(h, space_parity(S), M)


def cocycle(h1, h2, parity):
    """C(h1, h2) from C(p_a p_b, q_a q_b) = (-1)^{|p_b||q_a|} + delta_ab, antisymmetric."""
    return _clean(_cocycle_one_way(h1, h2, parity) - _cocycle_one_way(h2, h1, parity))


def _cocycle_one_way(h1, h2, parity):
    total = Fraction(0)
    pp = h1.part({("p", "p")})
    qq = h2.part({("q", "q")})
    for (X, Y), c1 in pp.items():
        a, b = _variable(X), _variable(Y)
        for (U, V), c2 in qq.items():
            u, v = _variable(U), _variable(V)
            if (u, v) == (a, b):
                sign = 1
            elif (u, v) == (b, a):
                sign = -1 if (parity[a[1]] and parity[b[1]]) else 1
            else:
                continue
            val = (-1 if (parity[b[1]] and parity[a[1]]) else 1) + (1 if a == b else 0)
            total = total + c1 * c2 * sign * val
    return _clean(total)


def check_quantization_identity(S, k, M):
    """Compare the dilaton-shifted quantized 𝓛_k with L_k."""
    from .state_space import supertrace_theta
    Lhat = dilaton_shift(quantized_script_L(S, k, M), S)
    Lk = virasoro_operator(S, k, M)
    diff = Lhat - Lk
    report = {"k": k, "holds": diff.is_zero(), "defect": diff.dump()}
    if k == 0:
        signed = supertrace_theta(S)
        unsigned = sum(((e.mu_plus - HALF) * (e.mu_plus + HALF) for e in S.basis), Fraction(0))
        const = diff.constant()
        rest = diff - DiffOperator.scalar(diff.parity, const)
        report.update({
            "operator_part_matches": rest.is_zero(),
            "constant_gap": const,
            "signed_quarter_str": signed / 4,
            "unsigned_quarter_sum": unsigned / 4,
            "holds": rest.is_zero() and const == signed / 4,
        })
    return report


def check_bracket_defect(S, M):
    """[𝓛^_1, 𝓛^_{-1}] - 2 𝓛^_0 is the scalar C(h_1, h_{-1}) = -1/2 Str(theta^2 - 1/4)."""
    from .state_space import supertrace_theta
    from .virasoro_ops import commutator
    par = space_parity(S)
    hs = {k: quadratic_hamiltonian(script_L(S, k), S, M, check=False) for k in (-1, 0, 1)}
    ops = {k: quantize(h, par, M) for k, h in hs.items()}
    defect = (commutator(ops[1], ops[-1]) - ops[0].scale(2)).window(M - 2)
    const = defect.constant()
    scalar_only = (defect - DiffOperator.scalar(par, const)).is_zero()
    c = cocycle(hs[1], hs[-1], par)
    expected = -supertrace_theta(S) / 2
    return {
        "scalar_only": scalar_only,
        "defect": const,
        "cocycle": c,
        "expected": expected,
        "holds": scalar_only and const == c == expected,
    }


# ---------------------------------------------------------------- conjugation

def adjoint_series(L, A, max_terms=50):
    """Terms ad_L^n(A) until they vanish."""
    terms = [A]
    for _ in range(max_terms):
        nxt = loop_commutator(L, terms[-1])
        if nxt.is_zero():
            return terms
        terms.append(nxt)
    raise NonNilpotentWindow("ad-iteration did not terminate")


def conjugate(log_T, A, S=None, M=6):
    """(T A T^{-1}, C_T(A)) with T = exp(log_T).

    The constant C_T(A) = C(log T, sum ad^n/(n+1)! A) is returned only when
    every term is infinitesimal symplectic (so has a Hamiltonian); else None.
    """
    terms = adjoint_series(log_T, A)
    conj = LoopOperator(A.n)
    fact = 1
    for n, t in enumerate(terms):
        if n:
            fact *= n
        conj = conj + t.scale(Fraction(1, fact))
    const = None
    if S is not None:
        series = LoopOperator(A.n)
        fact = 1
        for n, t in enumerate(terms):
            fact *= n + 1
            series = series + t.scale(Fraction(1, fact))
        if is_infinitesimal_symplectic(series, S.eta) and is_infinitesimal_symplectic(log_T, S.eta):
            par = space_parity(S)
            h1 = quadratic_hamiltonian(log_T, S, M, check=False)
            h2 = quadratic_hamiltonian(series, S, M, check=False)
            const = cocycle(h1, h2, par)
    return conj, const


def connection_operator(S):
    """d/dz + z^{-1} theta = z^{-1}(delta + theta)."""
    n = S.rank
    return LoopOperator(n, {(-1, 0): hodge_matrix(S), (-1, 1): _identity(n)})
