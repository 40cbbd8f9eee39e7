"""Residual quadrics mod p and the p-neighbor construction.

Neighbors are built for lattices in a quadratic ambient space (V, Q) with
Hessian H = 2 * gram.  A point of P(L/pL) lies on the residual quadric when
Q(lift) lies in a*p; it is nonsingular when the linear form H(v, .) is not
identically zero mod a*p.  Each nonsingular point P yields the neighbor
L' = {x in L : H(v_P, x) = 0 mod a*p} + (1/p) v_P.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import matrix as mx
from .ffquadric import kernel_mod_p, projective_points
from .rational import ord_p
from .spaces import Ideal, Lattice, QuadraticSpace, UNIT_IDEAL, eval_H, eval_Q


class NeighborLiftError(ValueError):
    """No lift with Q(v) in a*p^2 exists for the requested point."""


@dataclass(frozen=True)
class QuadricPoint:
    point: tuple[int, ...]     # coordinates in the lattice basis, mod p
    singular: bool


class ResidualQuadric:
    """Lazily enumerated residual quadric of L at p relative to a."""

    def __init__(self, lattice: Lattice, p: int, a: Ideal,
                 max_points: int | None = None):
        if not isinstance(lattice.space, QuadraticSpace):
            raise ValueError("residual quadrics live on quadratic lattices")
        self.lattice = lattice
        self.prime = p
        self.a = a
        self.max_points = max_points
        _check_valued_for_quadric(lattice, p, a)

    def _q_val(self, coeffs) -> Fraction:
        v = _lift(self.lattice, coeffs)
        return eval_Q(self.lattice.space, v)

    def points(self):
        p, a = self.prime, self.a
        for coeffs in projective_points(p, self.lattice.dim, self.max_points):
            q = self._q_val(coeffs)
            if q != 0 and ord_p(q / a.gen, p) < 1:
                continue
            yield QuadricPoint(coeffs, _is_singular(self.lattice, coeffs, p, a))

    def nonsingular_points(self):
        return (pt for pt in self.points() if not pt.singular)


def _check_valued_for_quadric(L: Lattice, p: int, a: Ideal):
    """Well-definedness of Q mod a*p on L/pL needs H(L, L) in a locally at p.
    At odd p this is a-valuedness of Q; at p = 2 it also admits the boundary
    case Q(L) in a/2 arising from maximal bilinear lattices."""
    hg = L.hessian_gram()
    bound = a.ord(p)
    for row in hg:
        for x in row:
            if x != 0 and ord_p(x, p) < bound:
                raise ValueError(f"lattice is not a-valued at {p}")


def _lift(L: Lattice, coeffs) -> mx.Vec:
    return tuple(sum(Fraction(c) * row[k] for c, row in zip(coeffs, L.basis))
                 for k in range(L.dim))


def _is_singular(L: Lattice, coeffs, p: int, a: Ideal) -> bool:
    v = _lift(L, coeffs)
    pa = a.gen * p
    for b in L.basis:
        h = eval_H(L.space, v, b)
        if h != 0 and ord_p(h / pa, p) < 0:
            return False
    return True


def residual_quadric(L: Lattice, p: int, a: Ideal = UNIT_IDEAL,
                     max_points: int | None = None) -> ResidualQuadric:
    return ResidualQuadric(L, p, a, max_points)


def lift_nonsingular(L: Lattice, p: int, a: Ideal, point) -> mx.Vec:
    """Lift v of the point with v not in pL and Q(v) in a*p^2.

    Solves Q(v0 + p*t*w) = 0 mod a*p^2 along a gradient lift w; tries the
    linear-congruence solution first and falls back to small searches, which
    covers the boundary case where Q(L) only lies in a/2 at p = 2.
    """
    if _is_singular(L, point, p, a):
        raise ValueError("point is singular")
    space = L.space
    v0 = _lift(L, point)
    ap2 = a.gen * p * p
    if _in_ideal(eval_Q(space, v0), ap2, p):
        return v0
    # gradient lifts: basis vectors with unit H(v0, w)/a, then their sums
    units = [b for b in L.basis
             if eval_H(space, v0, b) != 0
             and ord_p(eval_H(space, v0, b) / a.gen, p) == 0]
    candidates = list(units)
    for i in range(len(units)):
        for j in range(len(L.basis)):
            w = tuple(x + y for x, y in zip(units[i], L.basis[j]))
            if eval_H(space, v0, w) != 0 and \
                    ord_p(eval_H(space, v0, w) / a.gen, p) == 0:
                candidates.append(w)
    for w in candidates:
        h = eval_H(space, v0, w) / a.gen
        q0 = eval_Q(space, v0) / (a.gen * p)
        # linear solve: q0 + t*h = 0 mod p, exact when p^2 Q(w) is in a*p^2
        t0 = (-_mod_p(q0, p) * pow(_mod_p(h, p), -1, p)) % p
        for t in [t0] + [t for t in range(p) if t != t0]:
            v = tuple(x + p * t * y for x, y in zip(v0, w))
            if _in_ideal(eval_Q(space, v), ap2, p):
                return v
    raise NeighborLiftError(f"no lift with Q in a*p^2 at p={p}")


def _in_ideal(x: Fraction, gen: Fraction, p: int) -> bool:
    return x == 0 or ord_p(x / gen, p) >= 0


def _mod_p(x: Fraction, p: int) -> int:
    if x == 0:
        return 0
    if x.denominator % p == 0:
        raise ValueError("not p-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def p_neighbor(L: Lattice, p: int, a: Ideal, point) -> Lattice:
    """The neighbor L' = L'' + (1/p) v_P at a nonsingular quadric point."""
    v = lift_nonsingular(L, p, a, point)
    space = L.space
    # the linear form x -> H(v, x)/gen(a) mod p cuts out L'' = {H(v, x) in a*p}
    phi = [_mod_p(eval_H(space, v, b) / a.gen, p) for b in L.basis]
    # kernel of the linear form phi on L/pL, lifted, plus pL
    rows = []
    for c in kernel_mod_p([phi], p):
        rows.append(tuple(sum(Fraction(ci) * L.basis[i][k] for i, ci in enumerate(c))
                          for k in range(L.dim)))
    for b in L.basis:
        rows.append(tuple(p * x for x in b))
    rows.append(tuple(x / p for x in v))
    d = mx.denominator_lcm(mx.mat(rows))
    h = mx.hnf_int([[int(x * d) for x in row] for row in rows])
    if len(h) != L.dim:
        raise ValueError("degenerate neighbor basis")
    return Lattice(space, [[Fraction(x, d) for x in row] for row in h])


def all_p_neighbors(L: Lattice, p: int, a: Ideal = UNIT_IDEAL,
                    max_points: int | None = None) -> list[Lattice]:
    """One neighbor per nonsingular point, sorted by canonical basis."""
    rq = residual_quadric(L, p, a, max_points)
    out = [p_neighbor(L, p, a, pt.point) for pt in rq.nonsingular_points()]
    out.sort(key=lambda lat: lat.canonical_basis())
    return out


def sample_p_neighbors(L: Lattice, p: int, a: Ideal, k: int,
                       seed: int = 0) -> list[Lattice]:
    """Up to k neighbors from random nonsingular points; no completeness claim."""
    _check_valued_for_quadric(L, p, a)
    rng = random.Random(seed)
    n = L.dim
    seen = set()
    out = []
    budget = 200 * max(k, 1)
    while len(out) < k and budget > 0:
        budget -= 1
        raw = [rng.randrange(p) for _ in range(n)]
        lead = next((i for i, c in enumerate(raw) if c), None)
        if lead is None:
            continue
        inv = pow(raw[lead], -1, p)
        coeffs = tuple((c * inv) % p for c in raw)
        if coeffs in seen:
            continue
        seen.add(coeffs)
        q = eval_Q(L.space, _lift(L, coeffs))
        if q != 0 and ord_p(q / a.gen, p) < 1:
            continue
        if _is_singular(L, coeffs, p, a):
            continue
        out.append(p_neighbor(L, p, a, coeffs))
    out.sort(key=lambda lat: lat.canonical_basis())
    return out
