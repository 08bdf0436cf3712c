"""Jacobian algebras via Buchberger's algorithm and the residue pairing.

Internally polynomials are plain dicts {exponent tuple: Fraction}.  The
monomial order is weighted degree (using the polynomial's own weights)
followed by reverse lexicographic order.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import DegenerateResidue, NonIsolatedSingularity
from .poly_core import Poly, hessian, weight_system


class MonomialOrder:
    def __init__(self, weights):
        self.weights = tuple(Fraction(w) for w in weights)

    def key(self, mono):
        wdeg = sum((e * w for e, w in zip(mono, self.weights)), Fraction(0))
        return (wdeg, tuple(-e for e in reversed(mono)))

    def leading(self, p):
        return max(p, key=self.key)

    def __repr__(self):
        return f"wdegrevlex{self.weights}"


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _shift(p, mono, c):
    return {tuple(x + y for x, y in zip(m, mono)): v * c for m, v in p.items()}


def _axpy(target, p, mono, c):
    """target += c * x^mono * p, in place."""
    for m, v in p.items():
        mm = tuple(x + y for x, y in zip(m, mono))
        nv = target.get(mm, 0) + v * c
        if nv:
            target[mm] = nv
        else:
            del target[mm]


class GroebnerBasis:
    def __init__(self, generators, order):
        self.order = order
        self.generators = generators          # list of monic dicts
        self.leads = [order.leading(g) for g in generators]

    def reduce(self, p):
        """Full reduction of a dict polynomial; returns the remainder dict."""
        p = dict(p)
        rem = {}
        key = self.order.key
        while p:
            m = max(p, key=key)
            c = p[m]
            for g, lm in zip(self.generators, self.leads):
                if _divides(lm, m):
                    _axpy(p, g, _sub(m, lm), -c)
                    break
            else:
                rem[m] = c
                del p[m]
        return rem

    def as_polys(self, nvars):
        return [Poly(nvars, g) for g in self.generators]


def _monic(p, order):
    lm = order.leading(p)
    c = p[lm]
    return {m: v / c for m, v in p.items()}


def groebner_basis(gens, weights):
    """Reduced Groebner basis of the ideal spanned by `gens` (Poly or dict)."""
    order = MonomialOrder(weights)
    polys = []
    for g in gens:
        d = dict(g.terms) if isinstance(g, Poly) else dict(g)
        if d:
            polys.append(_monic(d, order))
    basis = GroebnerBasis(list(polys), order)
    pairs = list(combinations(range(len(polys)), 2))
    while pairs:
        i, j = pairs.pop()
        li, lj = basis.leads[i], basis.leads[j]
        lc = _lcm(li, lj)
        if lc == tuple(a + b for a, b in zip(li, lj)):
            continue  # coprime leading terms
        s = _shift(basis.generators[i], _sub(lc, li), Fraction(1))
        _axpy(s, basis.generators[j], _sub(lc, lj), Fraction(-1))
        r = basis.reduce(s)
        if r:
            r = _monic(r, order)
            k = len(basis.generators)
            basis.generators.append(r)
            basis.leads.append(order.leading(r))
            pairs.extend((a, k) for a in range(k))
    # minimalize and inter-reduce
    gens = basis.generators
    leads = basis.leads
    keep = []
    for a in range(len(gens)):
        redundant = False
        for b in range(len(gens)):
            if a == b:
                continue
            if _divides(leads[b], leads[a]) and (leads[b] != leads[a] or b < a):
                redundant = True
                break
        if not redundant:
            keep.append(a)
    minimal = GroebnerBasis([gens[a] for a in keep], order)
    reduced = []
    for a, g in enumerate(minimal.generators):
        others = GroebnerBasis([h for b, h in enumerate(minimal.generators) if b != a], order)
        lm = minimal.leads[a]
        tail = {m: v for m, v in g.items() if m != lm}
        r = others.reduce(tail) if others.generators else tail
        r[lm] = Fraction(1)
        reduced.append(r)
    reduced.sort(key=lambda g: order.key(order.leading(g)))
    return GroebnerBasis(reduced, order)


def jacobian_ideal(W):
    return [W.derivative(i) for i in range(W.nvars)]


class MilnorBasis:
    def __init__(self, monomials, weights):
        self.monomials = monomials
        self.weights = weights

    def __len__(self):
        return len(self.monomials)


class JacobianAlgebra:
    """Jac(W) with a monomial basis and the residue normalised by Res(hess W) = mu."""

    def __init__(self, W, weights=None):
        self.W = W
        self.nvars = n = W.nvars
        self.q = tuple(weights) if weights is not None else tuple(weight_system(W)) if n else ()
        if n == 0:
            self.gb = None
            self.standard = [()]
            self.socle = ()
            self.socle_weight = Fraction(0)
            self._hess_coeff = Fraction(1)
            self.mu = 1
            return
        self.gb = groebner_basis(jacobian_ideal(W), self.q)
        self.standard = _standard_monomials(self.gb, n)
        self.mu = len(self.standard)
        wt = self.weight
        self.socle_weight = sum((1 - 2 * w for w in self.q), Fraction(0))
        top = [m for m in self.standard if wt(m) == self.socle_weight]
        if len(top) != 1:
            raise DegenerateResidue(f"expected one socle monomial for {W}, found {len(top)}")
        self.socle = top[0]
        h = self.gb.reduce(hessian(W).terms)
        c = h.get(self.socle, Fraction(0))
        if c == 0:
            raise DegenerateResidue(f"Hessian of {W} vanishes in the Jacobian algebra")
        self._hess_coeff = c

    def weight(self, mono):
        return sum((e * w for e, w in zip(mono, self.q)), Fraction(0))

    def normal_form(self, p):
        d = p.terms if isinstance(p, Poly) else p
        if self.nvars == 0:
            return dict(d)
        return self.gb.reduce(d)

    def residue(self, p):
        nf = self.normal_form(p)
        return nf.get(self.socle, Fraction(0)) * self.mu / self._hess_coeff

    def pair_monomials(self, a, b):
        if self.nvars == 0:
            return Fraction(1)
        if self.weight(a) + self.weight(b) != self.socle_weight:
            return Fraction(0)
        m = tuple(x + y for x, y in zip(a, b))
        return self.residue({m: Fraction(1)})

    def milnor_basis(self):
        return MilnorBasis(list(self.standard), [self.weight(m) for m in self.standard])


def _standard_monomials(gb, n):
    leads = gb.leads
    for i in range(n):
        if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in leads):
            raise NonIsolatedSingularity(f"no pure power of x{i + 1} among leading terms; quotient is infinite")
    found = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                mm = m[:i] + (m[i] + 1,) + m[i + 1:]
                if mm in found or any(_divides(lm, mm) for lm in leads):
                    continue
                found.add(mm)
                nxt.append(mm)
        frontier = nxt
    order = gb.order
    return sorted(found, key=order.key)


@lru_cache(maxsize=256)
def jacobian_algebra(W, weights=None):
    return JacobianAlgebra(W, weights)


def monomial_basis(W):
    return jacobian_algebra(W).milnor_basis()


def normal_form(p, gb):
    return Poly(p.nvars, gb.reduce(p.terms))


def residue_pairing(f, g, W):
    alg = jacobian_algebra(W)
    return alg.residue((f * g).terms)

