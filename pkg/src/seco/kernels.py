"""Backend selection for the hot kernels.

Prefers the compiled extension when it was built; otherwise falls back
to the numpy implementation. `BACKEND` records which one is active.
"""

from __future__ import annotations

try:
    from . import _kernels_cy as _impl

    BACKEND = "cython"
except ImportError:  # extension not built on this install
    from . import _kernels_py as _impl

    BACKEND = "python"

from . import _kernels_py as python_impl

cosine_matrix = _impl.cosine_matrix
relevance_kernel = _impl.relevance_kernel
merge_kernel = _impl.merge_kernel

__all__ = [
    "BACKEND",
    "cosine_matrix",
    "relevance_kernel",
    "merge_kernel",
    "python_impl",
]
