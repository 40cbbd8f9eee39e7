"""Hot inner loops with two interchangeable backends.

The numba backend JIT-compiles the F_p quadric scans and the isometry
backtracking; the numpy backend implements the same operations without numba.
Selection: LATMAX_KERNELS=numba|numpy, default numba when importable.  All
kernels work on int64 data prepared (and overflow-checked) by the callers, so
both paths are exact.
"""

from __future__ import annotations

import os


def _pick_backend() -> str:
    choice = os.environ.get("LATMAX_KERNELS", "").strip().lower()
    if choice in ("numba", "numpy"):
        if choice == "numba":
            try:
                import numba  # noqa: F401
            except ImportError as exc:
                raise ImportError(
                    "LATMAX_KERNELS=numba but numba is not importable") from exc
        return choice
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


BACKEND = _pick_backend()

if BACKEND == "numba":
    from ._numba import count_isotropic_vectors, dfs_exists
else:
    from ._numpy import count_isotropic_vectors, dfs_exists

__all__ = ["BACKEND", "count_isotropic_vectors", "dfs_exists"]
