"""Exact matrix algebra over Fraction, plus integer Hermite/Smith normal forms.

Matrices are immutable tuples of tuples (rows).  Everything here is exact;
no floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .rational import rat

Mat = tuple[tuple[Fraction, ...], ...]
Vec = tuple[Fraction, ...]


def mat(rows) -> Mat:
    return tuple(tuple(rat(x) for x in row) for row in rows)


def vec(entries) -> Vec:
    return tuple(rat(x) for x in entries)


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def zeros(r: int, c: int) -> Mat:
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def dims(m: Mat) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v: Vec, m: Mat) -> Vec:
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def mat_scale(c, m: Mat) -> Mat:
    c = rat(c)
    return tuple(tuple(c * x for x in row) for row in m)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_symmetric(m: Mat) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def det(m: Mat) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    n = len(m)
    a = [list(row) for row in m]
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return result


def inverse(m: Mat) -> Mat:
    """Exact inverse by Gauss-Jordan; raises ValueError on singular input."""
    n = len(m)
    a = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def denominator_lcm(m: Mat) -> int:
    d = 1
    for row in m:
        for x in row:
            d = lcm(d, x.denominator)
    return d


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return g, x, y


def hnf_int(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of the integer row span.

    Returns only the nonzero rows: pivots positive, entries above each pivot
    reduced to [0, pivot).  The result is the canonical basis of the row span.
    """
    if not rows:
        return []
    n = len(rows[0])
    basis: list[list[int]] = []   # rows ordered by pivot column
    pivots: list[int] = []
    for vec0 in rows:
        v = list(vec0)
        while True:
            j = next((c for c in range(n) if v[c] != 0), None)
            if j is None:
                break
            k = next((i for i, pc in enumerate(pivots) if pc >= j), len(pivots))
            if k == len(pivots) or pivots[k] > j:
                basis.insert(k, v)
                pivots.insert(k, j)
                break
            row = basis[k]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for c in range(j, n):
                    v[c] -= q * row[c]
            else:
                g, x, y = _xgcd(a, b)
                ag, bg = a // g, b // g
                for c in range(j, n):
                    ra, vb = row[c], v[c]
                    row[c] = x * ra + y * vb
                    v[c] = -bg * ra + ag * vb
    # normalize: positive pivots, reduce entries above pivots
    for i, j in enumerate(pivots):
        if basis[i][j] < 0:
            basis[i] = [-x for x in basis[i]]
    for i in range(len(basis) - 1, -1, -1):
        p = basis[i][pivots[i]]
        for i2 in range(i):
            q = basis[i2][pivots[i]] // p
            if q:
                basis[i2] = [x - q * y for x, y in zip(basis[i2], basis[i])]
    return basis


def hnf_int_with_transform(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """(H, U) with U unimodular, U * rows = [H; 0] and H the nonzero HNF rows."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    h = hnf_int(aug)
    # pad with zero rows so the transform stays square
    while len(h) < m:
        h.append([0] * (n + m))
    # rows whose first n entries vanish sort to the end automatically only if
    # their pivots lie in the transform columns; reorder to keep H rows first
    lead = sorted(range(m), key=lambda i: (not any(h[i][:n]), i))
    h = [h[i] for i in lead]
    hn = [row[:n] for row in h if any(row[:n])]
    u = [row[n:] for row in h]
    return hn, u


def left_kernel_int(rows: list[list[int]]) -> list[list[int]]:
    """Basis of {x in Z^m : x * rows = 0} (saturated, via HNF transform)."""
    _, u = hnf_int_with_transform(rows)
    n = len(rows[0]) if rows else 0
    out = []
    for urow, row in zip(u, _apply(u, rows, n)):
        if not any(row):
            out.append(urow)
    return out


def _apply(u: list[list[int]], rows: list[list[int]], n: int) -> list[list[int]]:
    return [[sum(ur[i] * rows[i][j] for i in range(len(rows))) for j in range(n)]
            for ur in u]


def hnf(m: Mat) -> Mat:
    """Canonical rational row HNF: scale by the denominator lcm, reduce, unscale.

    Requires full row rank; raises ValueError("degenerate basis") otherwise.
    """
    m = mat(m)
    d = denominator_lcm(m)
    int_rows = [[int(x * d) for x in row] for row in m]
    h = hnf_int(int_rows)
    if len(h) < len(m):
        raise ValueError("degenerate basis")
    return tuple(tuple(Fraction(x, d) for x in row) for row in h)


def smith(m) -> tuple[int, ...]:
    """Elementary divisors d1 | d2 | ... | dn of a nonsingular integer matrix."""
    s, _, _ = smith_with_transform(m)
    divisors = tuple(s[i][i] for i in range(len(s)))
    if any(d == 0 for d in divisors):
        raise ValueError("singular matrix")
    return divisors


def smith_with_transform(m) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """(S, U, V) with U*m*V = S diagonal, d1 | d2 | ..., U and V unimodular."""
    a = [[int(x) for x in row] for row in m]
    r = len(a)
    c = len(a[0]) if a else 0
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def row_op(i1, i2, q):  # a[i1] -= q*a[i2]
        a[i1] = [x - q * y for x, y in zip(a[i1], a[i2])]
        u[i1] = [x - q * y for x, y in zip(u[i1], u[i2])]

    def col_op(j1, j2, q):  # col j1 -= q*col j2
        for row in a:
            row[j1] -= q * row[j2]
        for row in v:
            row[j1] -= q * row[j2]

    def swap_rows(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    t = 0
    while t < min(r, c):
        # find a nonzero pivot of smallest absolute value
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, r):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                row_op(i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, c):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                col_op(j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry
        p = a[t][t]
        offender = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)
            continue
        t += 1
    for i in range(min(r, c)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return a, u, v


def int_matrix(m: Mat) -> list[list[int]]:
    """Integer entries of a matrix that is exactly integral (raises otherwise)."""
    out = []
    for row in m:
        r = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not integral")
            r.append(x.numerator)
        out.append(r)
    return out


def gcd_of_entries(m: Mat) -> Fraction:
    """Positive generator of the fractional ideal spanned by the entries."""
    d = denominator_lcm(m)
    g = 0
    for row in m:
        for x in row:
            g = gcd(g, int(x * d))
    if g == 0:
        return Fraction(0)
    return Fraction(g, d)
