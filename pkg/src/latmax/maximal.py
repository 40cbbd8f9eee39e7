"""Maximal a-valued bilinear lattices and maximal a-valued quadratic lattices.

The bilinear construction saturates, then adjoins a maximal totally isotropic
submodule of each prime part of the discriminant module (CRT-cleaned lifts).
The quadratic construction runs the bilinear one in the Hessian space and then
repairs evenness at p = 2 through an even 2-neighbor or the even sublattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from . import matrix as mx
from .ffquadric import isotropic_projective_points
from .latticealg import (ambient_bilinear_gram, discriminant_module, dual,
                         saturate, value_ideal)
from .neighbor import NeighborLiftError, p_neighbor, residual_quadric
from .spaces import (BilinearSpace, Ideal, Lattice, QuadraticSpace,
                     UNIT_IDEAL, hessian_space, standard_lattice)


def maximal_bilinear(space: BilinearSpace, a: Ideal = UNIT_IDEAL,
                     start: Lattice | None = None) -> Lattice:
    """An a-valued lattice with no proper a-valued superlattice.

    The output is certified: its discriminant module must have no nonzero
    isotropic element in any prime part, otherwise this raises.
    """
    L = start if start is not None else standard_lattice(space)
    if L.space != space:
        raise ValueError("start lattice lives in a different space")
    L = saturate(L, a)
    dm = discriminant_module(L, a)
    primes = dm.primes()
    added = []
    for p in primes:
        part = dm.prime_parts[p]
        split_basis = _maximal_isotropic(part.gram_mod_p)
        others = prod(q for q in primes if q != p)
        crt = others * pow(others, -1, p) if others > 1 else 1
        for coeffs in split_basis:
            v = tuple(sum(Fraction(c) * g[k] for c, g in zip(coeffs, part.generators))
                      for k in range(L.dim))
            added.append(tuple(crt * x for x in v))
    if added:
        rows = list(L.basis) + added
        d = mx.denominator_lcm(mx.mat(rows))
        h = mx.hnf_int([[int(x * d) for x in row] for row in rows])
        L = Lattice(space, [[Fraction(x, d) for x in row] for row in h])
    certify_maximal(L, a)
    return L


def _maximal_isotropic(f):
    from .ffquadric import witt_split
    return witt_split(f).maximal_isotropic


def certify_maximal(L: Lattice, a: Ideal = UNIT_IDEAL):
    """Check that no prime part of D_a(L) has a nonzero isotropic element."""
    dm = discriminant_module(L, a)
    for p, part in dm.prime_parts.items():
        for pt in isotropic_projective_points(part.gram_mod_p):
            raise AssertionError(
                f"not maximal: isotropic element {pt} in the {p}-part")
    return dm


@dataclass(frozen=True)
class EvenSublatticeResult:
    sublattice: Lattice
    index: int
    prime: int


def even_sublattice_at_p(L: Lattice, a: Ideal, p: int) -> EvenSublatticeResult:
    """Kernel of v -> H(v, v) mod p^ord_p(2a) on an a-valued bilinear lattice.

    Over Q only p = 2 is nontrivial; the index is 1 or p.
    """
    if p != 2:
        return EvenSublatticeResult(L, 1, p)
    hg = mx.mat_mul(mx.mat_mul(L.basis, ambient_bilinear_gram(L.space)),
                    mx.transpose(L.basis))
    phi = []
    for i in range(L.dim):
        val = hg[i][i] / a.gen
        if val.denominator % 2 == 0:
            raise ValueError("lattice is not a-valued at 2")
        phi.append(val.numerator * pow(val.denominator, -1, 2) % 2)
    if not any(phi):
        return EvenSublatticeResult(L, 1, 2)
    from .ffquadric import kernel_mod_p
    rows = []
    for c in kernel_mod_p([phi], 2):
        rows.append(tuple(sum(Fraction(ci) * L.basis[i][k] for i, ci in enumerate(c))
                          for k in range(L.dim)))
    for b in L.basis:
        rows.append(tuple(2 * x for x in b))
    d = mx.denominator_lcm(mx.mat(rows))
    h = mx.hnf_int([[int(x * d) for x in row] for row in rows])
    sub = Lattice(L.space, [[Fraction(x, d) for x in row] for row in h])
    return EvenSublatticeResult(sub, sub.index_in(L), 2)


def is_a_even_at_2(L: Lattice, a: Ideal) -> bool:
    hg = mx.mat_mul(mx.mat_mul(L.basis, ambient_bilinear_gram(L.space)),
                    mx.transpose(L.basis))
    for i in range(L.dim):
        val = hg[i][i] / (2 * a.gen)
        if val.denominator % 2 == 0:
            return False
    return True


def maximal_quadratic(space: QuadraticSpace, a: Ideal = UNIT_IDEAL,
                      start: Lattice | None = None) -> Lattice:
    """A quadratic lattice with Q(L) in a*Z and no proper such superlattice.

    Equivalently maximal a-even in the Hessian space: build the maximal
    bilinear lattice there, then if it fails evenness at 2, take the first
    a-even 2-neighbor in point order, falling back to the even sublattice.
    """
    hs = hessian_space(space)
    start_h = Lattice(hs, start.basis) if start is not None else None
    L = maximal_bilinear(hs, a, start_h)
    if not is_a_even_at_2(L, a):
        Lq = Lattice(space, L.basis)
        replacement = None
        rq = residual_quadric(Lq, 2, a)
        for pt in rq.nonsingular_points():
            try:
                cand = p_neighbor(Lq, 2, a, pt.point)
            except NeighborLiftError:
                continue
            cand_h = Lattice(hs, cand.basis)
            if is_a_even_at_2(cand_h, a) and a.contains_ideal(value_ideal(cand_h)):
                replacement = cand_h
                break
        if replacement is None:
            replacement = even_sublattice_at_p(L, a, 2).sublattice
        L = replacement
    out = Lattice(space, L.basis)
    if not a.contains_ideal(value_ideal(out)):
        raise AssertionError("output is not a-valued as a quadratic lattice")
    return out
