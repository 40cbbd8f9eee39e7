"""Duality, value ideals, p-adic Jordan structure, saturation and
discriminant modules for a-valued bilinear lattices over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import matrix as mx
from .ffquadric import FpForm
from .rational import factor, ord_p, rational_prime_support
from .spaces import Ideal, Lattice, QuadraticSpace, UNIT_IDEAL


def ambient_bilinear_gram(space) -> mx.Mat:
    """Bilinear gram of the ambient: B itself, or the Hessian 2*gram of Q."""
    if isinstance(space, QuadraticSpace):
        return mx.mat_scale(2, space.gram)
    return space.gram


def dual(L: Lattice, a: Ideal = UNIT_IDEAL) -> Lattice:
    """a-dual lattice {v : B(v, L) in a*Z}, computed as a * G^-1 * M."""
    m = L.basis
    g = mx.mat_mul(mx.mat_mul(m, ambient_bilinear_gram(L.space)), mx.transpose(m))
    if mx.det(g) == 0:
        raise ValueError("degenerate ambient")
    return Lattice(L.space, mx.mat_scale(a.gen, mx.mat_mul(mx.inverse(g), m)))


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Lattice intersection via (L1 cap L2)^# = L1^# + L2^#."""
    return dual(dual(L1) + dual(L2))


def value_ideal(L: Lattice) -> Ideal:
    """Bilinear lattices: gcd ideal of B(L, L).  Quadratic lattices: the ideal
    generated by the Q-values of a basis together with the Hessian cross
    values (the Q-value ideal, closed under Q(x + y))."""
    if isinstance(L.space, QuadraticSpace):
        qg = L.gram()
        n = L.dim
        vals = [qg[i][i] for i in range(n)] + \
               [2 * qg[i][j] for i in range(n) for j in range(i + 1, n)]
        g = mx.gcd_of_entries((tuple(vals),))
    else:
        g = mx.gcd_of_entries(L.gram())
    if g == 0:
        raise ValueError("zero form")
    return Ideal(g)


def is_a_valued(L: Lattice, a: Ideal) -> bool:
    return a.contains_ideal(value_ideal(L))


@dataclass(frozen=True)
class JordanBlock:
    scale: int
    basis: mx.Mat       # rows, ambient coordinates
    gram: mx.Mat        # bilinear gram on these rows

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class JordanDecomposition:
    prime: int
    blocks: tuple[JordanBlock, ...]   # one per scale, increasing

    @property
    def max_scale(self) -> int:
        return self.blocks[-1].scale


def _min_valuation_pivot(g, idx, p):
    """(valuation, i, j) of the minimal-valuation entry; diagonal preferred,
    then smallest row index.  Entries indexed by positions in idx."""
    best = None
    k = len(idx)
    for i in range(k):
        x = g[i][i]
        if x != 0:
            v = ord_p(x, p)
            if best is None or v < best[0]:
                best = (v, i, i)
    for i in range(k):
        for j in range(i + 1, k):
            x = g[i][j]
            if x != 0:
                v = ord_p(x, p)
                if best is None or v < best[0]:
                    best = (v, i, j)
    return best


def jordan_decomposition(L: Lattice, p: int) -> JordanDecomposition:
    """p-adic Jordan splitting by symmetric Gram-Schmidt.

    At odd p every block gram comes out diagonal; at p = 2 a minimal-valuation
    off-diagonal entry with no matching diagonal forces an indivisible 2x2
    cell.  Row operations only ever use p-integral coefficients, so the output
    rows span the same Z_(p)-lattice.
    """
    amb = ambient_bilinear_gram(L.space)
    vectors = [list(row) for row in L.basis]
    n = len(vectors)

    def b(x, y):
        return sum(xi * s for xi, s in zip(x, mx.mat_vec(amb, tuple(y))))

    pieces = []   # (scale, [vector, ...]) per cell, in construction order
    rest = list(range(n))
    while rest:
        g = [[b(vectors[r], vectors[c]) for c in rest] for r in rest]
        found = _min_valuation_pivot(g, rest, p)
        if found is None:
            raise ValueError("degenerate ambient")
        v_min, i, j = found
        if i != j and p != 2:
            # merge row j into row i: the new diagonal entry has valuation v_min
            vectors[rest[i]] = [x + y for x, y in
                                zip(vectors[rest[i]], vectors[rest[j]])]
            continue
        if i == j:
            pi = rest[i]
            d = b(vectors[pi], vectors[pi])
            for r in rest:
                if r != pi:
                    c = b(vectors[r], vectors[pi]) / d
                    vectors[r] = [x - c * y for x, y in zip(vectors[r], vectors[pi])]
            pieces.append((v_min, [vectors[pi]]))
            rest.remove(pi)
        else:
            # p = 2, indivisible two-dimensional cell
            pi, pj = rest[i], rest[j]
            gii = b(vectors[pi], vectors[pi])
            gij = b(vectors[pi], vectors[pj])
            gjj = b(vectors[pj], vectors[pj])
            dd = gii * gjj - gij * gij
            for r in rest:
                if r not in (pi, pj):
                    ri = b(vectors[r], vectors[pi])
                    rj = b(vectors[r], vectors[pj])
                    c1 = (ri * gjj - rj * gij) / dd
                    c2 = (rj * gii - ri * gij) / dd
                    vectors[r] = [x - c1 * y - c2 * z for x, y, z in
                                  zip(vectors[r], vectors[pi], vectors[pj])]
            pieces.append((v_min, [vectors[pi], vectors[pj]]))
            rest.remove(pi)
            rest.remove(pj)

    by_scale: dict[int, list] = {}
    for scale, vecs in pieces:
        by_scale.setdefault(scale, []).extend(vecs)
    blocks = []
    for scale in sorted(by_scale):
        rows = mx.mat(by_scale[scale])
        gram = tuple(tuple(b(list(x), list(y)) for y in rows) for x in rows)
        blocks.append(JordanBlock(scale, rows, gram))
    return JordanDecomposition(p, tuple(blocks))


def max_scale_index(L: Lattice, p: int, a: Ideal = UNIT_IDEAL) -> int:
    """Largest i with a nonzero (a p^i)-modular Jordan component."""
    jd = jordan_decomposition(L, p)
    alpha = a.ord(p)
    if jd.blocks[0].scale < alpha:
        raise ValueError(f"lattice is not a-valued at {p}")
    return jd.max_scale - alpha


def disc_order(L: Lattice, a: Ideal = UNIT_IDEAL) -> int:
    """|L^{#a} / L| for an a-valued lattice."""
    d = dual(L, a)
    t = mx.mat_mul(L.basis, mx.inverse(d.basis))
    if any(x.denominator != 1 for row in t for x in row):
        raise ValueError("lattice is not a-valued")
    dt = mx.det(t)
    return abs(dt.numerator)


def _elementary_divisor_valuations(L: Lattice, a: Ideal) -> dict[int, int]:
    """p -> ord_p(largest elementary divisor of L^{#a}/L) = max scale index."""
    d = dual(L, a)
    t = mx.mat_mul(L.basis, mx.inverse(d.basis))
    if any(x.denominator != 1 for row in t for x in row):
        raise ValueError("lattice is not a-valued")
    divisors = mx.smith(mx.int_matrix(t))
    top = divisors[-1]
    if top == 1:
        return {}
    return factor(top)


def saturate(L: Lattice, a: Ideal = UNIT_IDEAL) -> Lattice:
    """Smallest-effort a-valued superlattice with squarefree discriminant
    annihilator: repeatedly add l * L^{#a} with l = prod p^ceil(m_p/2).

    A lattice that is not a-valued is first shrunk by the smallest principal
    c with c^2 * B(L, L) contained in a.
    """
    # the bilinear value ideal drives the rescaling in both ambient kinds
    bg = mx.gcd_of_entries(mx.mat_mul(mx.mat_mul(L.basis, ambient_bilinear_gram(L.space)),
                                      mx.transpose(L.basis)))
    if not a.contains(bg):
        c = Fraction(1)
        for p, e in rational_prime_support(bg / a.gen).items():
            if e < 0:
                c *= Fraction(p) ** ((-e + 1) // 2)
        L = L.scale(c)
    while True:
        vals = _elementary_divisor_valuations(L, a)
        heavy = {p: m for p, m in vals.items() if m >= 2}
        if not heavy:
            return L
        ell = 1
        for p, m in heavy.items():
            ell *= p ** ((m + 1) // 2)
        L = L + dual(L, a).scale(ell)


@dataclass(frozen=True)
class DiscPart:
    dim: int
    generators: mx.Mat        # rows in L^{#a}, ambient coordinates
    gram_mod_p: FpForm        # induced form, values scaled into F_p by p/gen(a)


@dataclass(frozen=True)
class DiscriminantModule:
    order: int
    elementary_divisors: tuple[int, ...]
    prime_parts: dict[int, DiscPart]

    def primes(self):
        return sorted(self.prime_parts)


def discriminant_module(L: Lattice, a: Ideal = UNIT_IDEAL) -> DiscriminantModule:
    """L^{#a}/L with its induced F_p-valued forms on each prime part.

    Requires a squarefree annihilator (saturate first); the raw order is
    available through disc_order without that restriction.
    """
    d = dual(L, a)
    t = mx.mat_mul(L.basis, mx.inverse(d.basis))
    if any(x.denominator != 1 for row in t for x in row):
        raise ValueError("lattice is not a-valued")
    s, _, v = mx.smith_with_transform(mx.int_matrix(t))
    n = L.dim
    divisors = tuple(s[i][i] for i in range(n))
    order = 1
    for di in divisors:
        order *= di
    support = factor(order) if order > 1 else {}
    for p, e in support.items():
        if any(di % (p * p) == 0 for di in divisors):
            raise ValueError(
                f"discriminant module is not annihilated by {p}; saturate first")
    # rows of V^-1 * basis(L^{#a}) give generators f_i with L = sum d_i f_i
    v_inv = mx.inverse(mx.mat([[Fraction(x) for x in row] for row in v]))
    f = mx.mat_mul(v_inv, d.basis)
    amb = ambient_bilinear_gram(L.space)

    def b(x, y):
        return sum(xi * s2 for xi, s2 in zip(x, mx.mat_vec(amb, y)))

    parts = {}
    for p in sorted(support):
        gens = [tuple(Fraction(divisors[i] // p) * x for x in f[i])
                for i in range(n) if divisors[i] % p == 0]
        k = len(gens)
        scale = Fraction(p) / a.gen
        gram_rows = []
        for gi in gens:
            row = []
            for gj in gens:
                val = b(gi, gj) * scale
                if val != 0 and ord_p(val, p) < 0:
                    raise ValueError("induced form is not p-integral")
                row.append(_reduce_mod_p(val, p))
            gram_rows.append(row)
        parts[p] = DiscPart(k, mx.mat(gens), FpForm(p, gram_rows))
    return DiscriminantModule(order, divisors, parts)


def _reduce_mod_p(x: Fraction, p: int) -> int:
    if x == 0:
        return 0
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ValueError("value has a p in the denominator")
    return num * pow(den, -1, p) % p
