"""Finite diagonal symmetry groups stored as rational phase vectors.

A diagonal element acts by x_i -> exp(2 pi i theta_i) x_i; we keep the
phases theta_i in [0, 1) so that group elements are exact and hashable.
"""
from fractions import Fraction

from . import linalg
from .errors import ConfigError, NotASubgroup, NotASymmetryGroup, NotInvertible
from .poly_core import exponent_matrix, transpose, weight_system


class PhaseVector(tuple):
    def __new__(cls, phases):
        return super().__new__(cls, (Fraction(p) % 1 for p in phases))

    def __add__(self, other):
        return PhaseVector(a + b for a, b in zip(self, other))

    def __neg__(self):
        return PhaseVector(-a for a in self)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return PhaseVector(k * a for a in self)

    def is_identity(self):
        return all(a == 0 for a in self)

    def order(self):
        k = 1
        for a in self:
            k = k * a.denominator // _gcd(k, a.denominator)
        return k

    def age(self):
        return sum(self, Fraction(0))

    def fixed_indices(self):
        return tuple(i for i, a in enumerate(self) if a == 0)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self) + ")"

    def __repr__(self):
        return f"PhaseVector({self})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def identity(n):
    return PhaseVector([0] * n)


class DiagonalGroup:
    """A finite group of phase vectors, fully enumerated."""

    def __init__(self, nvars, generators, elements=None):
        self.nvars = nvars
        self.generators = [PhaseVector(g) for g in generators]
        if elements is None:
            elements = _closure(nvars, self.generators)
        self.elements = sorted(elements)
        self._set = frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return PhaseVector(g) in self._set

    def __eq__(self, other):
        return isinstance(other, DiagonalGroup) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def issubset(self, other):
        return self._set <= other._set

    def __repr__(self):
        return f"DiagonalGroup(order={len(self)}, generators={[str(g) for g in self.generators]})"


def _closure(nvars, gens):
    seen = {identity(nvars)}
    frontier = [identity(nvars)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def subgroup_generated(gens, nvars=None):
    gens = [PhaseVector(g) for g in gens]
    if nvars is None:
        if not gens:
            raise ValueError("nvars is required for an empty generator list")
        nvars = len(gens[0])
    return DiagonalGroup(nvars, gens)


def minimal_generators(nvars, elements):
    """A small generating set chosen greedily by decreasing element order."""
    gens = []
    span = {identity(nvars)}
    for g in sorted(elements, key=lambda e: (-e.order(), e)):
        if g not in span:
            gens.append(g)
            span = _closure(nvars, gens)
    return gens


def preserves(g, W):
    return all(sum((e * t for e, t in zip(m, g)), Fraction(0)).denominator == 1 for m in W.terms)


def maximal_group(W):
    """G_W.  For invertible W it is generated by the columns of E_W^{-1}."""
    n = W.nvars
    try:
        E = exponent_matrix(W)
    except NotInvertible:
        E = None
    if E is not None:
        inv = linalg.inverse(E)
        gens = [PhaseVector(col) for col in linalg.transpose(inv)]
        return DiagonalGroup(n, gens)
    rows = [list(m) for m in W.monomials()]
    if len(rows) > 24:
        raise NotInvertible(f"{W} is not invertible and has too many monomials for a direct solve")
    # pick n independent monomials; every symmetry lies in the lattice they cut out
    basis = []
    for r in rows:
        if linalg.rank(basis + [r]) > len(basis):
            basis.append(r)
    if len(basis) < n:
        raise NotInvertible(f"monomials of {W} do not pin down a finite symmetry group")
    inv = linalg.inverse(basis)
    ambient = _closure(n, [PhaseVector(c) for c in linalg.transpose(inv)])
    elements = [g for g in ambient if preserves(g, W)]
    return DiagonalGroup(n, minimal_generators(n, elements), elements)


def exponential_grading_element(q):
    return PhaseVector(q)


def rho_generators(W):
    """The generators rho_j of G_W (columns of E_W^{-1}), one per variable."""
    return [PhaseVector(col) for col in linalg.transpose(linalg.inverse(exponent_matrix(W)))]


def check_symmetry(G, W):
    for g in G.generators:
        if not preserves(g, W):
            raise NotASymmetryGroup(f"{g} does not preserve {W}")


def is_admissible(G, W):
    check_symmetry(G, W)
    return exponential_grading_element(weight_system(W)) in G


class SectorData:
    def __init__(self, gamma, q):
        self.gamma = PhaseVector(gamma)
        self.age = self.gamma.age()
        self.iota = self.age - sum(q, Fraction(0))
        self.fixed_indices = self.gamma.fixed_indices()
        self.n_gamma = len(self.fixed_indices)

    def __repr__(self):
        return f"SectorData(gamma={self.gamma}, age={self.age}, iota={self.iota}, N={self.n_gamma})"


def sector_data(gamma, q):
    return SectorData(gamma, q)


def is_special_linear(gamma):
    return PhaseVector(gamma).age().denominator == 1


def special_linear_part(G):
    elements = [g for g in G if is_special_linear(g)]
    return DiagonalGroup(G.nvars, minimal_generators(G.nvars, elements), elements)


def mirror_group(G, W):
    """G^T inside G_{W^T}: elements pairing integrally with G through E_W."""
    E = exponent_matrix(W)
    for g in G.generators:
        if not preserves(g, W):
            raise NotASubgroup(f"{g} is not in G_W for {W}")
    big = maximal_group(transpose(W))
    n = W.nvars

    def pairs_integrally(h):
        for g in G.generators:
            s = sum((h[i] * E[i][j] * g[j] for i in range(n) for j in range(n)), Fraction(0))
            if s.denominator != 1:
                return False
        return True

    elements = [h for h in big if pairs_integrally(h)]
    return DiagonalGroup(n, minimal_generators(n, elements), elements)


def resolve_group_spec(spec, W):
    """Group spec: 'J', 'max', 'SL', or a list of generators [[num, den], ...] per vector."""
    n = W.nvars
    if isinstance(spec, str):
        key = spec.strip()
        if key == "J":
            return subgroup_generated([exponential_grading_element(weight_system(W))])
        if key == "max":
            return maximal_group(W)
        if key == "SL":
            return special_linear_part(maximal_group(W))
        if key.startswith("["):
            import json
            try:
                spec = json.loads(key)
            except ValueError as exc:
                raise ConfigError(f"cannot read group spec {spec!r}: {exc}") from None
        else:
            raise ConfigError(f"unknown group spec {spec!r}")
    gens = []
    if spec and all(isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(y, int) for y in x)
                    for x in spec) and len(spec) == n:
        # a single vector written as [[num, den], ...]
        spec = [spec]
    for vec in spec:
        if len(vec) != n:
            raise ConfigError(f"generator {vec} has {len(vec)} entries for {n} variables")
        phases = []
        for entry in vec:
            if isinstance(entry, (list, tuple)):
                if len(entry) != 2 or entry[1] == 0:
                    raise ConfigError(f"bad phase {entry}")
                phases.append(Fraction(entry[0], entry[1]))
            else:
                phases.append(Fraction(entry))
        gens.append(PhaseVector(phases))
    G = DiagonalGroup(n, gens)
    check_symmetry(G, W)
    return G
