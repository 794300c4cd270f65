"""Pure-numpy fallback for the hot compression kernels.

Import-time selection between this module and the compiled extension
happens in :mod:`seco.kernels`; both expose the same three functions
with float64 accumulation over float32 storage.
"""

from __future__ import annotations

import numpy as np

from .tensor import EPS_NORM


def cosine_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities between rows of `a` and rows of `b`.

    Returns a float64 matrix of shape (a.rows, b.rows), clamped to [-1, 1].
    """
    a64 = np.asarray(a, dtype=np.float64)
    b64 = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a64, axis=1)
    nb = np.linalg.norm(b64, axis=1)
    denom = np.outer(na, nb) + EPS_NORM
    return np.clip((a64 @ b64.T) / denom, -1.0, 1.0)


def relevance_kernel(context: np.ndarray, q_bar: np.ndarray) -> np.ndarray:
    """Cosine similarity of every context row against the pooled query."""
    return cosine_matrix(context, np.asarray(q_bar, dtype=np.float64)[None, :])[:, 0]


def merge_kernel(
    context: np.ndarray,
    group_of: np.ndarray,
    weights: np.ndarray,
    n_groups: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Softmax-weighted aggregation of context rows within each group.

    Tokens with group id < 0 are ignored (dropped). Returns the merged
    rows (n_groups x d, float64) and the per-token normalized weights
    (NaN for dropped tokens).
    """
    ctx64 = np.asarray(context, dtype=np.float64)
    group_of = np.asarray(group_of, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    merged = np.zeros((n_groups, ctx64.shape[1]), dtype=np.float64)
    alpha = np.full(ctx64.shape[0], np.nan, dtype=np.float64)
    for k in range(n_groups):
        members = np.nonzero(group_of == k)[0]
        w = weights[members]
        e = np.exp(w - w.max())
        a = e / e.sum()
        alpha[members] = a
        merged[k] = a @ ctx64[members]
    return merged, alpha
