"""Pure-numpy kernel backend: identical contracts to kernels/_numba.py."""

import numpy as np


def count_isotropic_vectors(g, p):
    """Number of nonzero v in F_p^n with v g v^t = 0 mod p."""
    g = np.asarray(g, dtype=np.int64)
    n = g.shape[0]
    grids = np.meshgrid(*([np.arange(p, dtype=np.int64)] * n), indexing="ij")
    vecs = np.stack([gr.ravel() for gr in grids], axis=1)
    q = np.einsum("vi,ij,vj->v", vecs, g, vecs) % p
    nonzero = np.any(vecs != 0, axis=1)
    return int(np.count_nonzero((q == 0) & nonzero))


def dfs_exists(bm, norm, vidx, prefix, n):
    """Backtracking existence search over packed uint64 candidate bitsets."""
    k0 = len(prefix)
    if k0 >= n:
        return True
    w = norm.shape[1]
    masks = np.zeros((n, n, w), dtype=np.uint64)
    masks[k0, k0:n] = norm[k0:n]
    for a in range(k0):
        for lv in range(k0, n):
            masks[k0, lv] &= bm[vidx[a, lv], prefix[a]]
    ptr = [0] * n
    depth = k0
    while depth >= k0:
        j = _next_bit(masks[depth, depth], ptr[depth], w)
        if j < 0:
            depth -= 1
            continue
        ptr[depth] = j + 1
        if depth == n - 1:
            return True
        nd = depth + 1
        rows = masks[depth, nd:n] & bm[vidx[depth, nd:n], j]
        if np.all(np.any(rows != 0, axis=1)):
            masks[nd, nd:n] = rows
            ptr[nd] = 0
            depth = nd
    return False


def _next_bit(mask_row, start, w):
    t = start >> 6
    if t >= w:
        return -1
    word = int(mask_row[t]) >> (start & 63)
    if word:
        return start + (word & -word).bit_length() - 1
    for t2 in range(t + 1, w):
        word = int(mask_row[t2])
        if word:
            return (t2 << 6) + (word & -word).bit_length() - 1
    return -1
