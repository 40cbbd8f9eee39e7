"""Symmetric bilinear forms over prime fields F_p: radicals, isotropy,
hyperbolic splitting and maximal totally isotropic subspaces.

The quadratic map here is always Q_B(x) = B(x, x) derived from the bilinear
form; over F_2 it is additive and squaring is the identity.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .rational import legendre, sqrt_mod_p

DEFAULT_MAX_POINTS = 10**7


def _point_bound() -> int:
    env = os.environ.get("LATMAX_MAX_POINTS")
    return int(env) if env else DEFAULT_MAX_POINTS


class EnumerationBound(Exception):
    """Raised when a projective enumeration would exceed the point budget."""


@dataclass(frozen=True)
class FpForm:
    p: int
    gram: tuple[tuple[int, ...], ...]

    def __init__(self, p, gram):
        g = tuple(tuple(int(x) % p for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("gram must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("gram must be symmetric")
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def b(self, x, y) -> int:
        return sum(xi * sum(gij * yj for gij, yj in zip(row, y))
                   for xi, row in zip(x, self.gram)) % self.p

    def q(self, x) -> int:
        return self.b(x, x)

    def restrict(self, rows) -> "FpForm":
        return FpForm(self.p, [[self.b(r, s) for s in rows] for r in rows])

    def det(self) -> int:
        return _det_mod_p(self.gram, self.p)


def _det_mod_p(gram, p) -> int:
    n = len(gram)
    a = [list(row) for row in gram]
    result = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result = result * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            if a[r][col] % p:
                f = a[r][col] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return result % p


def _rref_mod_p(rows, p):
    """(reduced rows, pivot columns) of a matrix over F_p."""
    a = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_mod_p(rows, p):
    """Basis of the right kernel {x : rows * x = 0} over F_p."""
    ncols = len(rows[0]) if rows else 0
    rref, pivots = _rref_mod_p(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-rref[r][fc]) % p
        basis.append(tuple(v))
    return basis


def radical(f: FpForm):
    """(radical basis, complement basis) of V under B."""
    rad = kernel_mod_p([list(r) for r in f.gram], f.p)
    _, pivots = _rref_mod_p([list(r) for r in f.gram], f.p)
    comp = [tuple(1 if c == j else 0 for c in range(f.dim)) for j in pivots]
    return rad, comp


def is_isotropic(f: FpForm) -> bool:
    """Criteria-based test; input must be non-degenerate."""
    if f.det() == 0:
        raise ValueError("degenerate form: split off the radical first")
    n = f.dim
    if n == 0 or n == 1:
        return False
    if n >= 3:
        return True
    if f.p == 2:
        return True
    return legendre(-f.det() % f.p, f.p) == 1


def find_isotropic_vector(f: FpForm, seed: int = 0):
    """Nonzero v with Q_B(v) = 0 by random line-quadric intersection;
    falls back to a deterministic projective sweep after 64 failed trials."""
    if not is_isotropic(f):
        raise ValueError("anisotropic form")
    p, n = f.p, f.dim
    rng = random.Random(seed)
    for _ in range(64):
        a = tuple(rng.randrange(p) for _ in range(n))
        m = tuple(rng.randrange(p) for _ in range(n))
        if not any(a) or not any(m):
            continue
        if _dependent(a, m, p):
            continue
        qa, qm = f.q(a), f.q(m)
        if qa == 0:
            return a
        if qm == 0:
            return m
        bam = f.b(a, m)
        if p == 2:
            t = qa * pow(qm, -1, 2) % 2
            v = tuple((x + t * y) % 2 for x, y in zip(a, m))
            if f.q(v) == 0 and any(v):
                return v
            continue
        # qm t^2 + 2 bam t + qa = 0
        disc = (bam * bam - qa * qm) % p
        root = sqrt_mod_p(disc, p)
        if root is None:
            continue
        t = (-bam + root) * pow(qm, -1, p) % p
        v = tuple((x + t * y) % p for x, y in zip(a, m))
        if any(v):
            return v
    for pt in projective_points(p, n):
        if f.q(pt) == 0:
            return pt
    raise AssertionError("isotropy criteria promised a zero but none was found")


def _dependent(a, m, p):
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if (a[i] * m[j] - a[j] * m[i]) % p:
                return False
    return True


def hyperbolic_complement(f: FpForm, v):
    """w with B(v, w) = 1 and B(w, w) = 0, for odd p."""
    if f.p == 2:
        raise ValueError("unsupported in characteristic two")
    p, n = f.p, f.dim
    w = None
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        if f.b(v, e):
            w = e
            break
    if w is None:
        raise ValueError("vector lies in the radical")
    inv = pow(f.b(v, w), -1, p)
    w = tuple(x * inv % p for x in w)
    c = f.b(w, w) * pow(2, -1, p) % p
    w = tuple((x - c * y) % p for x, y in zip(w, v))
    assert f.b(v, w) == 1 and f.b(w, w) == 0
    return w


@dataclass(frozen=True)
class WittSplit:
    p: int
    radical_basis: tuple
    hyperbolic_pairs: tuple     # ((v, w), ...) for odd p, () at p = 2
    isotropic_basis: tuple      # basis of I at p = 2, () for odd p
    anisotropic_basis: tuple
    maximal_isotropic: tuple    # basis of M

    @property
    def witt_index_part(self) -> int:
        return len(self.maximal_isotropic)


def witt_split(f: FpForm, seed: int = 0) -> WittSplit:
    """Orthogonal splitting V = R + (split part) + A and a maximal totally
    isotropic subspace: hyperbolic planes at odd p, the sheared isotropic
    block at p = 2."""
    p = f.p
    rad, comp = radical(f)
    if p != 2:
        pairs = []
        work = list(comp)
        while work:
            sub = f.restrict(work)
            if not is_isotropic(sub):
                break
            u_local = find_isotropic_vector(sub, seed)
            w_local = hyperbolic_complement(sub, u_local)
            u = _combine(u_local, work, p)
            w = _combine(w_local, work, p)
            pairs.append((u, w))
            rows = [[sub.b(u_local, tuple(1 if c == i else 0 for c in range(len(work))))
                     for i in range(len(work))],
                    [sub.b(w_local, tuple(1 if c == i else 0 for c in range(len(work))))
                     for i in range(len(work))]]
            work = [_combine(k, work, p) for k in kernel_mod_p(rows, p)]
        aniso = tuple(work)
        maximal = tuple(rad) + tuple(u for u, _ in pairs)
        split = WittSplit(p, tuple(rad), tuple(pairs), (), aniso, maximal)
    else:
        vecs = list(comp)
        qvals = [f.q(v) for v in vecs]
        if any(qvals):
            last = max(i for i, qv in enumerate(qvals) if qv)
            vecs.append(vecs.pop(last))
            vn = vecs[-1]
            qn = f.q(vn)
            sheared = []
            for v in vecs[:-1]:
                c = f.q(v) * pow(qn, -1, 2) % 2
                sheared.append(tuple((x + c * y) % 2 for x, y in zip(v, vn)))
            iso = tuple(sheared)
            aniso = (vn,)
        else:
            iso = tuple(vecs)
            aniso = ()
        maximal = tuple(rad) + iso
        split = WittSplit(p, tuple(rad), (), iso, aniso, maximal)
    for x in split.maximal_isotropic:
        assert f.q(x) == 0
    return split


def _combine(coeffs, rows, p):
    n = len(rows[0]) if rows else 0
    out = [0] * n
    for c, row in zip(coeffs, rows):
        for i in range(n):
            out[i] = (out[i] + c * row[i]) % p
    return tuple(out)


def projective_points(p: int, dim: int, max_points: int | None = None):
    """One representative per line of P^{dim-1}(F_p): first nonzero
    coordinate 1, lexicographic order over coordinate tuples."""
    bound = max_points if max_points is not None else _point_bound()
    if dim >= 1 and p ** (dim - 1) > bound:
        raise EnumerationBound(
            f"P^{dim - 1}(F_{p}) exceeds the enumeration bound {bound}; "
            "use a sampling mode")
    return _projective_iter(p, dim)


def _projective_iter(p, dim):
    from itertools import product
    for lead in range(dim - 1, -1, -1):
        for tail in product(range(p), repeat=dim - 1 - lead):
            yield (0,) * lead + (1,) + tail


def isotropic_projective_points(f: FpForm, max_points: int | None = None):
    """Points of the quadric Q_B = 0 in P(V), in enumeration order."""
    return (pt for pt in projective_points(f.p, f.dim, max_points) if f.q(pt) == 0)
