"""Independent brute-force oracles used by the test suite.

Everything here is deliberately written without the package's backtracking
kernels or neighbor machinery, so tests compare two genuinely different
routes: reduced-form enumeration with pairwise isometry search, exhaustive
finite-field scans, and 2-adic equivalence by congruence lifting.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from latmax import matrix as mx
from latmax.latticealg import jordan_decomposition
from latmax.rational import factor, legendre, ord_p
from latmax.spaces import BilinearSpace, QuadraticSpace, standard_lattice


# ---------------------------------------------------------------------------
# exhaustive finite-field scans

def ff_isotropic_vectors(p: int, gram) -> list[tuple[int, ...]]:
    """All nonzero v in F_p^n with v*gram*v = 0 mod p, by full sweep."""
    n = len(gram)
    out = []
    for v in product(range(p), repeat=n):
        if not any(v):
            continue
        q = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n)) % p
        if q == 0:
            out.append(v)
    return out


def ff_max_isotropic_dim(p: int, gram) -> int:
    """Dimension of a largest totally isotropic subspace, by subset search."""
    n = len(gram)
    vectors = [v for v in product(range(p), repeat=n)]

    def b(x, y):
        return sum(x[i] * gram[i][j] * y[j] for i in range(n) for j in range(n)) % p

    best = 0
    # greedy over all subspace chains is exponential; n <= 4 and p <= 3 keep
    # the straightforward recursion affordable
    def extend(basis):
        nonlocal best
        best = max(best, len(basis))
        span = set()
        for coeffs in product(range(p), repeat=len(basis)):
            w = tuple(sum(c * v[i] for c, v in zip(coeffs, basis)) % p
                      for i in range(n))
            span.add(w)
        for v in vectors:
            if not any(v) or v in span:
                continue
            if b(v, v) != 0:
                continue
            if any(b(v, u) != 0 for u in basis):
                continue
            extend(basis + [v])

    extend([])
    return best


# ---------------------------------------------------------------------------
# positive definite form enumeration and isometry by plain search

def is_pos_def(g) -> bool:
    m = mx.mat(g)
    return all(mx.det(tuple(row[:k] for row in m[:k])) > 0
               for k in range(1, len(m) + 1))


def reduced_ternary_grams(det: int) -> list[tuple[tuple[int, ...], ...]]:
    """Integer Grams [[a,d,e],[d,b,f],[e,f,c]] covering every class of
    positive ternary forms of the given determinant (a reduction superset:
    a <= b <= c, |2d|,|2e| <= a, |2f| <= b)."""
    out = []
    a = 1
    while a * a * a <= 2 * det:
        b = a
        while a * b * b <= 2 * det:
            for d in range(-(a // 2), a // 2 + 1):
                for e in range(-(a // 2), a // 2 + 1):
                    for f in range(-(b // 2), b // 2 + 1):
                        ab = a * b - d * d
                        if ab <= 0:
                            continue
                        num = det - 2 * d * e * f + a * f * f + b * e * e
                        if num % ab:
                            continue
                        c = num // ab
                        if c < b:
                            continue
                        g = ((a, d, e), (d, b, f), (e, f, c))
                        if is_pos_def(g):
                            out.append(g)
            b += 1
        a += 1
    return out


def _vectors_up_to(g, bound: int):
    """Integer vectors with 0 < Q <= bound by box search (exact, small cases)."""
    n = len(g)
    # diagonal entries bound the box: Q >= sum lambda_min x_i^2 is awkward
    # exactly; use the crude bound |x_i| <= bound (diag entries >= 1).
    lim = []
    for i in range(n):
        lim.append(int((Fraction(bound) / Fraction(g[i][i])) ** Fraction(1, 2)) + 2)
    out = []
    for v in product(*[range(-m, m + 1) for m in lim]):
        if not any(v):
            continue
        q = sum(v[i] * g[i][j] * v[j] for i in range(n) for j in range(n))
        if 0 < q <= bound:
            out.append((v, q))
    return out


def isometric_bruteforce(g1, g2) -> bool:
    """Isometry testing by direct tuple search over candidate images."""
    n = len(g1)
    if mx.det(mx.mat(g1)) != mx.det(mx.mat(g2)):
        return False
    bound = max(g1[i][i] for i in range(n))
    cands = _vectors_up_to(g2, bound)

    def search(rows):
        k = len(rows)
        if k == n:
            return True
        for v, q in cands:
            if q != g1[k][k]:
                continue
            if any(sum(v[i] * g2[i][j] * rows[a][j] for i in range(n)
                       for j in range(n)) != g1[a][k] for a in range(k)):
                continue
            if search(rows + [v]):
                return True
        return False

    return search([])


def aut_order_bruteforce(g) -> int:
    """|Aut| by counting full image tuples among short vectors (no bitsets)."""
    n = len(g)
    bound = max(g[i][i] for i in range(n))
    cands = _vectors_up_to(g, bound)

    count = 0

    def search(rows):
        nonlocal count
        k = len(rows)
        if k == n:
            count += 1
            return
        for v, q in cands:
            if q != g[k][k]:
                continue
            if any(sum(v[i] * g[i][j] * rows[a][j] for i in range(n)
                       for j in range(n)) != g[a][k] for a in range(k)):
                continue
            search(rows + [v])

    search([])
    return count


def ternary_classes(det: int) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """All isometry classes of positive ternary integer Grams of determinant
    det, as (gram, aut order), via reduction superset + isometry dedup."""
    reps: list[tuple[tuple[int, ...], ...]] = []
    for g in reduced_ternary_grams(det):
        if not any(isometric_bruteforce(g, r) for r in reps):
            reps.append(g)
    return [(g, aut_order_bruteforce(g)) for g in reps]


# ---------------------------------------------------------------------------
# local invariants and 2-adic equivalence by congruence lifting

def odd_symbol(g, p: int):
    """Canonical Jordan data at an odd prime: sorted (scale, dim, eps)."""
    lat = standard_lattice(BilinearSpace(mx.mat(g)))
    jd = jordan_decomposition(lat, p)
    out = []
    for b in jd.blocks:
        unit = mx.det(b.gram) / Fraction(p) ** (b.scale * b.dim)
        eps = legendre(unit.numerator * pow(unit.denominator, -1, p), p)
        out.append((b.scale, b.dim, eps))
    return tuple(sorted(out))


def two_adic_profile(g):
    """(scale, dim, type) profile plus unit determinant mod 8 and per-train
    oddity totals; all necessary invariants of the 2-adic class."""
    from latmax.mass import two_adic_constituents
    cons = two_adic_constituents(mx.mat(g))
    profile = tuple((c.scale, c.dim, c.type_I) for c in cons)
    det = mx.det(mx.mat(g))
    v = ord_p(det, 2)
    unit = det / Fraction(2) ** v
    det8 = unit.numerator * pow(unit.denominator, -1, 8) % 8
    trains = []
    current = []
    prev = None
    for c in cons:
        if prev is not None and c.scale - prev >= 2:
            trains.append(tuple(current))
            current = []
        current.append(c)
        prev = c.scale
    trains.append(tuple(current))
    train_oddity = tuple(sum(c.oddity for c in tr) % 8 for tr in trains)
    return profile, det8, train_oddity


def z2_equivalent(g1, g2, kmax: int | None = None, node_cap: int = 2_000_000) -> bool:
    """Z_2-equivalence by exhaustive congruence solutions mod 8 followed by
    depth-first linear lifting to kmax bits; necessary invariants first."""
    m1, m2 = mx.mat(g1), mx.mat(g2)
    d1, d2 = mx.det(m1), mx.det(m2)
    if ord_p(d1, 2) != ord_p(d2, 2):
        return False
    if two_adic_profile(g1) != two_adic_profile(g2):
        return False
    n = len(g1)
    if kmax is None:
        kmax = ord_p(d1, 2) + 4
    a = [[int(x) for x in row] for row in m1]
    b = [[int(x) for x in row] for row in m2]

    def gram_of(cols, mod):
        return [[sum(cols[i][r] * a[r][s] * cols[j][s] for r in range(n)
                     for s in range(n)) % mod for j in range(len(cols))]
                for i in range(len(cols))]

    # base solutions X mod 8 (columns are images of the basis vectors)
    base = []
    mod = 8
    all_v = list(product(range(mod), repeat=n))
    av = {v: tuple(sum(a[r][s] * v[s] for s in range(n)) % mod for r in range(n))
          for v in all_v}
    by_norm: dict[int, list] = {}
    for v in all_v:
        q = sum(v[r] * av[v][r] for r in range(n)) % mod
        by_norm.setdefault(q, []).append(v)

    def col_search(cols):
        k = len(cols)
        if k == n:
            x = [[cols[j][i] for j in range(n)] for i in range(n)]
            if _int_det(x) % 2:
                base.append(x)
            return
        for v in by_norm.get(b[k][k] % mod, ()):
            ok = True
            gv = av[v]
            for j in range(k):
                if sum(gv[r] * cols[j][r] for r in range(n)) % mod != b[j][k] % mod:
                    ok = False
                    break
            if ok:
                col_search(cols + [v])

    col_search([])
    if not base:
        return False
    if kmax <= 3:
        return True

    nodes = [0]

    def lifts(x, k):
        """Yield solutions mod 2^(k+1) extending x (given x works mod 2^k)."""
        mod_next = 1 << (k + 1)
        # residual R = (G2 - X^t G1 X) / 2^k mod 2
        xt_a_x = [[sum(x[r][i] * a[r][s] * x[s][j] for r in range(n)
                       for s in range(n)) for j in range(n)] for i in range(n)]
        r_mat = [[((b[i][j] - xt_a_x[i][j]) >> k) & 1 for j in range(n)]
                 for i in range(n)]
        if any(r_mat[i][i] for i in range(n)):
            return
        # solve (X^t G1 Y) + (X^t G1 Y)^t = R mod 2 over the 9 bits of Y
        c_mat = [[sum(x[r][i] * a[r][s] for r in range(n)) % 2
                  for s in range(n)] for i in range(n)]
        # c_mat[i][s] = (X^t G1)_{i s}; S_ij = sum_s c[i][s] Y[s][j] + c[j][s] Y[s][i]
        eqs = []
        rhs = []
        for i in range(n):
            for j in range(i + 1, n):
                row = [0] * (n * n)
                for s in range(n):
                    row[s * n + j] ^= c_mat[i][s]
                    row[s * n + i] ^= c_mat[j][s]
                eqs.append(row)
                rhs.append(r_mat[i][j])
        for ybits in _solve_f2(eqs, rhs, n * n):
            y = [[ybits[r * n + c2] for c2 in range(n)] for r in range(n)]
            yield [[(x[r][c2] + (y[r][c2] << k)) % mod_next for c2 in range(n)]
                   for r in range(n)]

    import sys
    sys.setrecursionlimit(10000)

    def dfs(x, k):
        if k >= kmax:
            return True
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise RuntimeError("z2 equivalence search exceeded its node cap")
        for x2 in lifts(x, k):
            if dfs(x2, k + 1):
                return True
        return False

    for x in base:
        if dfs(x, 3):
            return True
    return False


def _int_det(m) -> int:
    d = mx.det(mx.mat(m))
    return d.numerator


def _solve_f2(eqs, rhs, nvars):
    """All solutions of a linear system over F_2 (small systems only)."""
    rows = [list(r) + [h] for r, h in zip(eqs, rhs)]
    pivots = []
    r = 0
    for c in range(nvars):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][nvars]:
            return
    free = [c for c in range(nvars) if c not in pivots]
    for assign in product((0, 1), repeat=len(free)):
        sol = [0] * nvars
        for c, val in zip(free, assign):
            sol[c] = val
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            val = rows[i][nvars]
            for c2 in range(c + 1, nvars):
                if rows[i][c2]:
                    val ^= sol[c2]
            sol[c] = val
        yield sol


def same_genus(g1, g2) -> bool:
    """Genus equality of positive definite integer Grams by local invariants:
    determinant, canonical odd-p symbols, and Z_2-equivalence."""
    m1, m2 = mx.mat(g1), mx.mat(g2)
    if mx.det(m1) != mx.det(m2) or len(g1) != len(g2):
        return False
    det = mx.det(m1)
    for p in sorted(factor(abs(det.numerator) * det.denominator)):
        if p == 2:
            continue
        if odd_symbol(g1, p) != odd_symbol(g2, p):
            return False
    return z2_equivalent(g1, g2)
