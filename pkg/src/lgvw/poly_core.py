"""Sparse quasi-homogeneous polynomials over the rationals.

A polynomial in x1..xn is stored as a dict from exponent tuples to nonzero
Fractions.  The module also solves for weights, classifies invertible
polynomials into Fermat / chain / loop atoms and builds the transpose.
"""
from fractions import Fraction
from itertools import permutations
from math import prod
import re

from . import linalg
from .errors import (
    NonIntegerMilnorNumber,
    NonUniqueWeights,
    NotInvertible,
    NotQuasiHomogeneous,
    ParseError,
    UnclassifiableAtom,
    WeightOutOfRange,
)


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has wrong length for {nvars} variables")
            c = clean.get(mono, 0) + c
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self.terms = clean

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): Fraction(coeff)})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            if other == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def derivative(self, i):
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Poly(self.nvars, out)

    def restrict(self, indices):
        """Set every variable outside `indices` to zero; the result lives in len(indices) variables."""
        idx = list(indices)
        keep = set(idx)
        out = {}
        for m, c in self.terms.items():
            if all(e == 0 for i, e in enumerate(m) if i not in keep):
                out[tuple(m[i] for i in idx)] = c
        return Poly(len(idx), out)

    def monomials(self):
        return sorted(self.terms)

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Poly({format_polynomial(self)!r})"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^]))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unknown token {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_polynomial(text, nvars=None):
    """Parse a sum of terms like '3/2*x1^2*x2 + x3^3'.

    Juxtaposed factors ('x1^2x2') are accepted as products.  The variable
    count is the largest subscript unless `nvars` is given.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want}, got {got!r}", tok[2])
        i += 1
        return tok

    raw_terms = []
    sign = 1
    if peek()[1] == "-":
        take()
        sign = -1
    while True:
        coeff = Fraction(sign)
        factors = []
        tok = peek()
        if tok[0] == "num":
            coeff *= int(take()[1])
            if peek()[1] == "/":
                take()
                den_tok = take("num")
                if int(den_tok[1]) == 0:
                    raise ParseError("zero denominator", den_tok[2])
                coeff /= int(den_tok[1])
            if peek()[1] == "*":
                take()
            elif peek()[0] == "var":
                pass
            else:
                raw_terms.append((coeff, factors))
                if not _next_sep(peek()):
                    raise ParseError(f"unexpected {peek()[1]!r}", peek()[2])
                if peek()[0] == "end":
                    break
                sign = 1 if take()[1] == "+" else -1
                continue
        while True:
            tok = take("var")
            idx = int(tok[1][1:])
            if idx < 1:
                raise ParseError("variable subscripts start at 1", tok[2])
            exp = 1
            if peek()[1] == "^":
                take()
                if peek()[1] == "-":
                    raise ParseError("negative exponent", peek()[2])
                etok = take("num")
                exp = int(etok[1])
                if exp < 1:
                    raise ParseError("exponent must be positive", etok[2])
            factors.append((idx, exp))
            if peek()[1] == "*":
                take()
                continue
            if peek()[0] == "var":
                continue
            break
        raw_terms.append((coeff, factors))
        if peek()[0] == "end":
            break
        if not _next_sep(peek()):
            raise ParseError(f"unexpected {peek()[1]!r}", peek()[2])
        sign = 1 if take()[1] == "+" else -1
        if peek()[1] in "+-" and peek()[0] == "op":
            raise ParseError("doubled sign", peek()[2])
    n = max((v for _, fs in raw_terms for v, _ in fs), default=0)
    if nvars is not None:
        if nvars < n:
            raise ParseError(f"variable x{n} exceeds declared count {nvars}", 0)
        n = nvars
    if n == 0:
        raise ParseError("polynomial has no variables", 0)
    terms = {}
    for coeff, fs in raw_terms:
        mono = [0] * n
        for v, e in fs:
            mono[v - 1] += e
        mono = tuple(mono)
        terms[mono] = terms.get(mono, 0) + coeff
    return Poly(n, terms)


def _next_sep(tok):
    return tok[0] == "end" or (tok[0] == "op" and tok[1] in "+-")


def _format_monomial(mono):
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def format_polynomial(p):
    """Canonical text form: terms in decreasing lex order of exponents."""
    if not p.terms:
        return "0"
    out = ""
    for k, mono in enumerate(sorted(p.terms, reverse=True)):
        c = p.terms[mono]
        body = _format_monomial(mono)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if k == 0:
            out = ("-" if c < 0 else "") + text
        else:
            out += (" - " if c < 0 else " + ") + text
    return out


# ---------------------------------------------------------------- weights

class WeightSystem(tuple):
    """Tuple of Fraction weights q_i with 0 < q_i <= 1/2."""

    def __new__(cls, weights):
        return super().__new__(cls, (Fraction(w) for w in weights))

    def __str__(self):
        return "(" + ", ".join(str(w) for w in self) + ")"


def exponent_rows(W):
    return [list(m) for m in W.monomials()]


def weight_system(W):
    rows = exponent_rows(W)
    n = W.nvars
    aug = [r + [1] for r in rows]
    red, piv = linalg.row_echelon(aug)
    if n in piv:
        raise NotQuasiHomogeneous(f"no weights make every monomial of {W} degree 1")
    if len(piv) < n:
        raise NonUniqueWeights(f"weights of {W} are not determined (rank {len(piv)} < {n})")
    q = [Fraction(0)] * n
    for r, c in enumerate(piv):
        q[c] = red[r][n]
    for i, w in enumerate(q):
        if not (0 < w <= Fraction(1, 2)):
            raise WeightOutOfRange(f"weight of x{i + 1} is {w}, outside (0, 1/2]")
    return WeightSystem(q)


def central_charge(q):
    return sum((1 - 2 * w for w in q), Fraction(0))


def is_calabi_yau(W):
    return sum(weight_system(W)) == 1


def milnor_number(q):
    mu = prod((1 / Fraction(w) - 1 for w in q), start=Fraction(1))
    if mu.denominator != 1:
        raise NonIntegerMilnorNumber(f"prod(1/q_i - 1) = {mu} for weights {tuple(q)}")
    return int(mu)


# ---------------------------------------------------------------- invertible polynomials

class Atom:
    """A Kreuzer-Skarke block: kind is 'Fermat', 'Chain' or 'Loop'.

    `exponents` follow the variables in `variables` (0-based indices).  A
    chain reads x_{v1}^{a1} x_{v2} + ... + x_{vk}^{ak}; a loop closes back
    onto v1.
    """

    def __init__(self, kind, exponents, variables):
        self.kind = kind
        self.exponents = tuple(exponents)
        self.variables = tuple(variables)

    def __eq__(self, other):
        return isinstance(other, Atom) and (self.kind, self.exponents, self.variables) == (
            other.kind, other.exponents, other.variables)

    def __hash__(self):
        return hash((self.kind, self.exponents, self.variables))

    def __repr__(self):
        return f"{self.kind}({', '.join(map(str, self.exponents))})"

    def rows(self, nvars):
        out = []
        k = len(self.variables)
        for pos, (v, a) in enumerate(zip(self.variables, self.exponents)):
            row = [0] * nvars
            row[v] = a
            if self.kind == "Chain" and pos + 1 < k:
                row[self.variables[pos + 1]] = 1
            elif self.kind == "Loop":
                row[self.variables[(pos + 1) % k]] = 1
            out.append(row)
        return out


def exponent_matrix(W):
    """Square exponent matrix with row i = the monomial headed by x_i.

    The head of x_i^a x_j is the variable with exponent a >= 2.  Raises
    NotInvertible when W has the wrong number of terms, a singular matrix,
    or no consistent choice of heads.
    """
    n = W.nvars
    monos = W.monomials()
    if len(monos) != n:
        raise NotInvertible(f"{W} has {len(monos)} monomials for {n} variables")
    rows = [list(m) for m in monos]
    if linalg.det(rows) == 0:
        raise NotInvertible(f"exponent matrix of {W} is singular")
    ordered = [None] * n
    leftovers = []
    for r in rows:
        heads = [i for i, e in enumerate(r) if e >= 2]
        if len(heads) == 1 and ordered[heads[0]] is None:
            ordered[heads[0]] = r
        else:
            leftovers.append(r)
    for r in leftovers:
        free = [i for i in range(n) if ordered[i] is None and r[i] > 0]
        if not free:
            raise NotInvertible(f"cannot attach monomial {r} of {W} to a variable")
        ordered[free[0]] = r
    return ordered


def classify_invertible(W):
    n = W.nvars
    rows = exponent_matrix(W)
    pointer = {}
    for i, r in enumerate(rows):
        support = [j for j, e in enumerate(r) if e]
        others = [j for j in support if j != i]
        if r[i] < 2:
            raise UnclassifiableAtom(f"monomial {_format_monomial(r)} has head exponent < 2")
        if len(others) > 1 or any(r[j] != 1 for j in others):
            raise UnclassifiableAtom(f"monomial {_format_monomial(r)} matches no atom template")
        pointer[i] = others[0] if others else None
    incoming = {}
    for i, j in pointer.items():
        if j is not None:
            incoming.setdefault(j, []).append(i)
    if any(len(v) > 1 for v in incoming.values()):
        raise UnclassifiableAtom(f"{W} contains a branching (tree-type) block")
    atoms = []
    seen = set()
    for start in range(n):
        if start in seen or start in incoming:
            continue
        path = [start]
        while pointer[path[-1]] is not None:
            path.append(pointer[path[-1]])
        seen.update(path)
        kind = "Fermat" if len(path) == 1 else "Chain"
        atoms.append(Atom(kind, [rows[v][v] for v in path], path))
    for start in range(n):
        if start in seen:
            continue
        path = [start]
        while pointer[path[-1]] != start:
            path.append(pointer[path[-1]])
        seen.update(path)
        atoms.append(Atom("Loop", [rows[v][v] for v in path], path))
    atoms.sort(key=lambda a: a.variables[0])
    return atoms


def assemble_atoms(atoms, nvars):
    terms = {}
    for a in atoms:
        for r in a.rows(nvars):
            terms[tuple(r)] = Fraction(1)
    return Poly(nvars, terms)


def transpose(W):
    rows = exponent_matrix(W)
    cols = linalg.transpose(rows)
    return Poly(W.nvars, {tuple(c): Fraction(1) for c in cols})


def normalize_coefficients(W):
    return Poly(W.nvars, {m: Fraction(1) for m in W.terms})


def hessian(W):
    n = W.nvars
    entries = [[W.derivative(i).derivative(j) for j in range(n)] for i in range(n)]
    memo = {}

    # the sign alternates over the remaining columns only
    def laplace(row, cols):
        if row == n:
            return Poly.constant(n, 1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Poly(n)
        k = 0
        for c in range(n):
            if cols >> c & 1:
                continue
            e = entries[row][c]
            if not e.is_zero():
                total = total + e * laplace(row + 1, cols | (1 << c)) * (-1) ** k
            k += 1
        memo[key] = total
        return total

    return laplace(0, 0)


def weighted_degree(mono, q):
    return sum((e * w for e, w in zip(mono, q)), Fraction(0))


def canonical_form(W):
    """Permutation-invariant key: sorted weights, then lex-minimal sorted exponent rows."""
    q = weight_system(W)
    n = W.nvars
    rows = W.monomials()
    best = None
    for perm in permutations(range(n)):
        qq = tuple(q[p] for p in perm)
        if list(qq) != sorted(qq):
            continue
        key = tuple(sorted(tuple(r[p] for p in perm) for r in rows))
        if best is None or key < best[1]:
            best = (qq, key)
    return best
