"""Short vectors, automorphism counting, isometry testing and mass-terminated
genus enumeration for positive definite quadratic lattices.

The backtracking inner loops run on int64 inner-product tables through the
kernels package (numba or numpy backend); all final arithmetic is exact.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import matrix as mx
from .kernels import dfs_exists
from .neighbor import all_p_neighbors
from .rational import factor, isqrt_floor, next_prime, rat
from .spaces import Ideal, Lattice, QuadraticSpace, UNIT_IDEAL


def q_gram(L: Lattice) -> mx.Mat:
    """Gram of the quadratic form on the lattice basis (Q_B for bilinear)."""
    return L.gram()


def is_positive_definite(g: mx.Mat) -> bool:
    n = len(g)
    for k in range(1, n + 1):
        minor = tuple(row[:k] for row in g[:k])
        if mx.det(minor) <= 0:
            return False
    return True


def _ldl(g: mx.Mat):
    """Exact G = U^t D U with U unit upper triangular: Q(x) as a sum of
    weighted complete squares d_i (x_i + sum_{j>i} u_ij x_j)^2."""
    n = len(g)
    a = [list(row) for row in g]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(r, n):
                a[r][c] -= d[i] * u[i][r] * u[i][c]
    return d, u


def short_vectors(L: Lattice, bound) -> list[tuple[mx.Vec, Fraction]]:
    """All v in L with 0 < Q(v) <= bound, by exact recursive coordinate
    bounding on the square-completed form.  Both signs are returned."""
    bound = rat(bound)
    coords = short_vector_coords(L, bound)
    out = []
    for x, q in coords:
        v = tuple(sum(Fraction(c) * L.basis[i][k] for i, c in enumerate(x))
                  for k in range(L.dim))
        out.append((v, q))
    return out


def short_vector_coords(L: Lattice, bound) -> list[tuple[tuple[int, ...], Fraction]]:
    """Like short_vectors but in basis coordinates."""
    g = q_gram(L)
    if not is_positive_definite(g):
        raise ValueError("form is not positive definite")
    bound = rat(bound)
    n = len(g)
    d, u = _ldl(g)
    out = []
    x = [0] * n

    def descend(i: int, remaining: Fraction):
        if i < 0:
            if any(x):
                q = bound - remaining
                out.append((tuple(x), q))
            return
        c = sum(u[i][j] * x[j] for j in range(i + 1, n))
        # integer range with (xi + c)^2 * d_i <= remaining
        s = isqrt_floor(remaining / d[i])
        center = -c
        lo = int(center) - s - 2
        hi = int(center) + s + 2
        for xi in range(lo, hi + 1):
            t = (xi + c) * (xi + c) * d[i]
            if t <= remaining:
                x[i] = xi
                descend(i - 1, remaining - t)
        x[i] = 0

    descend(n - 1, bound)
    return out


class _Tables:
    """int64 inner-product tables and packed candidate bitsets for the DFS."""

    def __init__(self, coords: list[tuple[int, ...]], gram_int: list[list[int]],
                 targets: list[list[int]]):
        self.m = len(coords)
        self.n = len(targets)
        v = np.array(coords, dtype=object)
        g = np.array(gram_int, dtype=object)
        ip = v @ g @ v.T
        ipmax = max((abs(int(x)) for row in ip for x in row), default=0)
        tmax = max(abs(x) for row in targets for x in row)
        if max(ipmax, tmax) >= 2**62:
            raise OverflowError("inner products exceed the int64 kernel range")
        self.ip = ip.astype(np.int64)
        self.t = np.array(targets, dtype=np.int64)
        vals = sorted({int(x) for row in targets for x in row})
        self.vidx = np.array([[vals.index(int(self.t[a, b])) for b in range(self.n)]
                              for a in range(self.n)], dtype=np.int64)
        w = (self.m + 63) // 64
        self.words = max(w, 1)
        self.bm = np.zeros((len(vals), self.m, self.words), dtype=np.uint64)
        for vi, val in enumerate(vals):
            eq = self.ip == val
            for i in range(self.m):
                self.bm[vi, i] = _pack_bits(eq[i], self.words)
        diag = self.ip.diagonal()
        self.norm = np.zeros((self.n, self.words), dtype=np.uint64)
        for lv in range(self.n):
            self.norm[lv] = _pack_bits(diag == self.t[lv, lv], self.words)

    def level_mask(self, prefix: list[int], k: int) -> np.ndarray:
        mask = self.norm[k].copy()
        for a, j in enumerate(prefix):
            mask &= self.bm[self.vidx[a, k], j]
        return mask

    def exists(self, prefix: list[int]) -> bool:
        return bool(dfs_exists(self.bm, self.norm, self.vidx,
                               np.array(prefix, dtype=np.int64), self.n))


def _pack_bits(bools, words: int) -> np.ndarray:
    out = np.zeros(words, dtype=np.uint64)
    for j, b in enumerate(bools):
        if b:
            out[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return out


def _bits(mask: np.ndarray):
    for t, word in enumerate(mask):
        w = int(word)
        base = t << 6
        while w:
            low = w & -w
            yield base + low.bit_length() - 1
            w ^= low


def _int_gram_and_scale(g: mx.Mat) -> tuple[list[list[int]], int]:
    d = mx.denominator_lcm(g)
    return [[int(x * d) for x in row] for row in g], d


def _round_half(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def reduce_basis(L: Lattice) -> tuple[Lattice, mx.Mat]:
    """Greedy exact norm reduction of the basis (keeps the lattice fixed).

    Returns (reduced lattice, U) with U unimodular and U * L.basis the new
    basis.  This keeps the short-vector tables used by the backtracking small;
    it is not a general reduction feature."""
    g = [list(row) for row in q_gram(L)]
    n = len(g)
    u = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def apply(i, j, mu):
        for k in range(n):
            u[i][k] -= mu * u[j][k]
        for k in range(n):
            g[i][k] -= mu * g[j][k]
        for k in range(n):
            g[k][i] -= mu * g[k][j]

    changed = True
    while changed:
        changed = False
        order = sorted(range(n), key=lambda i: g[i][i])
        g2 = [[g[r][c] for c in order] for r in order]
        u2 = [u[r] for r in order]
        g, u = g2, u2
        for i in range(n):
            for j in range(n):
                if i == j or g[j][j] == 0:
                    continue
                mu = _round_half(g[i][j] / g[j][j])
                if mu != 0:
                    new_norm = g[i][i] - 2 * mu * g[i][j] + mu * mu * g[j][j]
                    if new_norm < g[i][i]:
                        apply(i, j, mu)
                        changed = True
    u_mat = mx.mat(u)
    return Lattice(L.space, mx.mat_mul(u_mat, L.basis)), u_mat


def aut_order(L: Lattice) -> int:
    """Order of the isometry group of (L, Q) via stabilizer-chain counting:
    the product over basis positions of the number of extendable images."""
    if not is_positive_definite(q_gram(L)):
        raise ValueError("form is not positive definite")
    L, _ = reduce_basis(L)
    g = q_gram(L)
    n = L.dim
    gi, scale = _int_gram_and_scale(g)
    bound = max(g[i][i] for i in range(n))
    coords = [x for x, _ in short_vector_coords(L, bound)]
    tables = _Tables(coords, gi, gi)
    basis_idx = [coords.index(tuple(1 if j == k else 0 for j in range(n)))
                 for k in range(n)]
    total = 1
    for k in range(n):
        prefix = basis_idx[:k]
        mask = tables.level_mask(prefix, k)
        count = 0
        for j in _bits(mask):
            if tables.exists(prefix + [j]):
                count += 1
        if count == 0:
            raise AssertionError("identity not found among candidates")
        total *= count
    return total


def isometry(L1: Lattice, L2: Lattice):
    """A basis transform W with W * gram(L2) * W^t = gram(L1), or None.

    Rows of W are coordinates (in L2's basis) of the images of L1's basis.
    """
    if L1.dim != L2.dim:
        return None
    if not (is_positive_definite(q_gram(L1)) and is_positive_definite(q_gram(L2))):
        raise ValueError("form is not positive definite")
    r1, u1 = reduce_basis(L1)
    r2, u2 = reduce_basis(L2)
    g1, g2 = q_gram(r1), q_gram(r2)
    if mx.det(g1) != mx.det(g2):
        return None
    n = L1.dim
    d = _lcm2(mx.denominator_lcm(g1), mx.denominator_lcm(g2))
    bound = max(g1[i][i] for i in range(n))
    sv1 = short_vector_coords(r1, bound)
    sv2 = short_vector_coords(r2, bound)
    theta1 = sorted(q for _, q in sv1)
    theta2 = sorted(q for _, q in sv2)
    if theta1 != theta2:
        return None
    gi1 = [[int(x * d) for x in row] for row in g1]
    gi2 = [[int(x * d) for x in row] for row in g2]
    coords2 = [x for x, _ in sv2]
    tables = _Tables(coords2, gi2, gi1)
    found = _dfs_find(tables)
    if found is None:
        return None
    w_red = mx.mat([list(coords2[j]) for j in found])
    # translate between the original bases: rows of U are reduced-basis coords
    w = mx.mat_mul(mx.mat_mul(mx.inverse(u1), w_red), u2)
    assert mx.mat_mul(mx.mat_mul(w, q_gram(L2)), mx.transpose(w)) == q_gram(L1)
    return w


def _lcm2(a: int, b: int) -> int:
    from math import lcm
    return lcm(a, b)


def _dfs_find(tables: _Tables):
    """First full assignment in candidate order, via per-level existence."""
    prefix: list[int] = []
    for k in range(tables.n):
        mask = tables.level_mask(prefix, k)
        step = None
        for j in _bits(mask):
            if tables.exists(prefix + [j]):
                step = j
                break
        if step is None:
            return None
        prefix.append(step)
    return prefix


def is_isometric(L1: Lattice, L2: Lattice) -> bool:
    return isometry(L1, L2) is not None


@dataclass(frozen=True)
class GenusRun:
    classes: tuple[tuple[Lattice, int], ...]
    partial_mass: Fraction
    target_mass: Fraction
    primes_used: tuple[int, ...]
    complete: bool


def _disc_primes(L: Lattice) -> set[int]:
    hd = mx.det(L.hessian_gram())
    out = set(factor(abs(hd.numerator)))
    out |= set(factor(hd.denominator))
    return out


def enumerate_genus(L: Lattice, a: Ideal = UNIT_IDEAL,
                    mass: Fraction | None = None, jobs: int = 1,
                    max_points: int | None = None, max_primes: int = 20) -> GenusRun:
    """All isometry classes in the genus of L by iterated p-neighbors at
    primes away from the discriminant, stopping at exact mass equality."""
    if not isinstance(L.space, QuadraticSpace):
        raise ValueError("genus enumeration expects a quadratic lattice")
    g = q_gram(L)
    if not is_positive_definite(g):
        raise ValueError(
            "indefinite lattice: mass by automorphism counting is undefined "
            "(covolume masses are out of scope)")
    if L.dim < 3:
        raise ValueError("rank >= 3 required")
    if mass is None:
        from .mass import siegel_mass
        target = siegel_mass(L, a)
    else:
        target = rat(mass)

    registry: list[tuple[Lattice, int]] = []
    lock = threading.Lock()
    by_key: dict = {}

    def add_class(cand: Lattice) -> bool:
        """Returns True when cand is a new class; thread-safe."""
        canon = cand.canonical()
        key = canon.canonical_basis()
        with lock:
            if key in by_key:
                return False
        # cheap invariants, then full isometry (outside the lock)
        for existing, _ in list(registry):
            if is_isometric(canon, existing):
                with lock:
                    by_key[key] = False
                return False
        order = aut_order(canon)
        with lock:
            if key in by_key:
                return False
            by_key[key] = True
            registry.append((canon, order))
        return True

    add_class(L)
    partial = sum(Fraction(1, order) for _, order in registry)
    primes_used: list[int] = []
    excluded = _disc_primes(L)
    p = 1
    complete = partial == target
    while True:
        p = next_prime(p)
        while p in excluded:
            p = next_prime(p)
        primes_used.append(p)
        frontier = list(range(len(registry)))
        while frontier:
            batch = [registry[i][0] for i in frontier]
            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    neighbor_lists = list(pool.map(
                        lambda lat: all_p_neighbors(lat, p, a, max_points), batch))
            else:
                neighbor_lists = [all_p_neighbors(lat, p, a, max_points)
                                  for lat in batch]
            start = len(registry)
            for neighbors in neighbor_lists:
                for nb in neighbors:
                    add_class(nb)
            frontier = list(range(start, len(registry)))
            partial = sum(Fraction(1, order) for _, order in registry)
            if partial > target:
                raise RuntimeError(
                    f"partial mass {partial} exceeds the target {target}; "
                    "the supplied or computed mass is wrong")
            if partial == target:
                break
        if partial == target:
            complete = True
            break
        # no new classes at this prime and mass still short: try the next one
        if len(primes_used) >= max_primes:
            raise RuntimeError(
                f"mass {target} not reached after closures at {primes_used}; "
                "the supplied or computed mass is wrong")
    classes = tuple(sorted(registry, key=lambda t: t[0].canonical_basis()))
    return GenusRun(classes, partial, target, tuple(primes_used), complete)
