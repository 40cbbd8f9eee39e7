"""numba-compiled kernels; see kernels/_numpy.py for the reference semantics."""

import numpy as np
from numba import njit


@njit(cache=True)
def count_isotropic_vectors(g, p):
    """Number of nonzero v in F_p^n with v g v^t = 0 mod p (g int64, reduced)."""
    n = g.shape[0]
    total = 1
    for _ in range(n):
        total *= p
    v = np.zeros(n, dtype=np.int64)
    count = 0
    for _ in range(total - 1):
        i = 0
        while True:
            v[i] += 1
            if v[i] == p:
                v[i] = 0
                i += 1
            else:
                break
        s = 0
        for r in range(n):
            if v[r] != 0:
                acc = 0
                for c in range(n):
                    acc += g[r, c] * v[c]
                s += v[r] * acc
        if s % p == 0:
            count += 1
    return count


@njit(cache=True)
def dfs_exists(bm, norm, vidx, prefix, n):
    """Backtracking search for a full gram-respecting assignment.

    bm[vi, i, :]  packed bitset over j of {IP[i, j] == value_vi}
    norm[L, :]    packed bitset over j of {IP[j, j] == T[L, L]}
    vidx[a, b]    index into bm of the value T[a, b]
    prefix        chosen candidate indices for levels 0..k-1 (consistent)

    Returns True iff the prefix extends to all n levels.
    """
    k0 = prefix.shape[0]
    if k0 >= n:
        return True
    w = norm.shape[1]
    masks = np.zeros((n, n, w), dtype=np.uint64)
    for lv in range(k0, n):
        for t in range(w):
            masks[k0, lv, t] = norm[lv, t]
        for a in range(k0):
            vi = vidx[a, lv]
            for t in range(w):
                masks[k0, lv, t] &= bm[vi, prefix[a], t]
    ptr = np.zeros(n, dtype=np.int64)
    ptr[k0] = 0
    depth = k0
    while depth >= k0:
        # next set bit at/after ptr[depth] in masks[depth, depth]
        j = -1
        start = ptr[depth]
        t = start >> 6
        while t < w:
            word = masks[depth, depth, t]
            if t == start >> 6:
                shift = start & 63
                word = (word >> np.uint64(shift)) << np.uint64(shift)
            if word != np.uint64(0):
                b = 0
                while (word >> np.uint64(b)) & np.uint64(1) == np.uint64(0):
                    b += 1
                j = (t << 6) + b
                break
            t += 1
        if j < 0:
            depth -= 1
            continue
        ptr[depth] = j + 1
        if depth == n - 1:
            return True
        nd = depth + 1
        empty = False
        for lv in range(nd, n):
            vi = vidx[depth, lv]
            any_bit = np.uint64(0)
            for t in range(w):
                x = masks[depth, lv, t] & bm[vi, j, t]
                masks[nd, lv, t] = x
                any_bit |= x
            if any_bit == np.uint64(0):
                empty = True
                break
        if not empty:
            ptr[nd] = 0
            depth = nd
    return False
