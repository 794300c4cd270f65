"""Query-aware semantic compression of context token embeddings.

Pipeline: pool the query, score every context token by cosine relevance,
pick the top-K tokens as semantic centers, assign each remaining token to
the center maximizing relevance x similarity, then merge every group with
a softmax over consistency weights. Three ablation variants are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .tensor import DimensionMismatchError, HiddenStates, mean_pool

#: Sentinel group id for tokens discarded by the no-merging variant.
DROPPED = -1


class Variant(str, Enum):
    DEFAULT = "default"
    NO_QUERY = "no-query"
    NO_CONSISTENCY_MERGING = "no-consistency-merging"
    UNIFORM_SAMPLE_CENTERS = "uniform-sample-centers"


@dataclass(frozen=True)
class CompressionConfig:
    """Compression rate and variant selector; ties always break low-index."""

    tau: int = 16
    variant: Variant = Variant.DEFAULT

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")


@dataclass(frozen=True)
class CompressionResult:
    """Compressed rows plus full provenance of the discrete choices.

    `group_of[i]` is the group id of context token i (DROPPED for tokens
    discarded by the no-merging variant); `weights_alpha` are the
    softmax-normalized merge weights (NaN for dropped tokens).
    """

    compressed: np.ndarray  # K x d, float32
    centers: tuple[int, ...]
    group_of: np.ndarray  # int64, length N_c
    weights_alpha: np.ndarray  # float64, length N_c
    weights_w: np.ndarray  # float64, length N_c
    relevance: np.ndarray  # float64, length N_c

    @property
    def k(self) -> int:
        return self.compressed.shape[0]


def num_compressed_tokens(n_context: int, tau: int) -> int:
    """Number of compressed tokens: max(2, ceil(N_c / tau)), capped at N_c."""
    if n_context < 1 or tau < 1:
        raise ValueError("n_context and tau must be >= 1")
    return min(max(2, math.ceil(n_context / tau)), n_context)


def relevance_scores(context: np.ndarray, q_bar: np.ndarray) -> np.ndarray:
    """Cosine relevance of every context row to the pooled query."""
    q_bar = np.asarray(q_bar, dtype=np.float64).ravel()
    if context.shape[1] != q_bar.shape[0]:
        raise DimensionMismatchError(
            f"context dim {context.shape[1]} != query dim {q_bar.shape[0]}"
        )
    return kernels.relevance_kernel(np.asarray(context, dtype=np.float32), q_bar)


def select_centers(r: np.ndarray, k: int) -> list[int]:
    """Indices of the k largest scores, ties to the lowest index, ascending."""
    r = np.asarray(r, dtype=np.float64)
    if not 1 <= k <= r.shape[0]:
        raise ValueError(f"k={k} outside [1, {r.shape[0]}]")
    # stable sort keeps ascending-index order among equal scores
    top = np.argsort(-r, kind="stable")[:k]
    return sorted(int(i) for i in top)


def assignment_scores(
    non_centers: np.ndarray, centers: np.ndarray, r_non: np.ndarray
) -> np.ndarray:
    """Joint score v[i, k] = r_i * cos(non-center i, center k)."""
    non_centers = np.asarray(non_centers, dtype=np.float32)
    centers = np.asarray(centers, dtype=np.float32)
    r_non = np.asarray(r_non, dtype=np.float64).ravel()
    if non_centers.shape[1] != centers.shape[1]:
        raise DimensionMismatchError(
            f"dim mismatch: {non_centers.shape[1]} vs {centers.shape[1]}"
        )
    if r_non.shape[0] != non_centers.shape[0]:
        raise DimensionMismatchError("r_non length must match non_centers rows")
    s = kernels.cosine_matrix(non_centers, centers)
    return r_non[:, None] * s


def assign_tokens(v: np.ndarray) -> np.ndarray:
    """Per-row argmax over centers, ties to the lowest center index."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] < 1:
        raise ValueError("v must have at least one column")
    return np.argmax(v, axis=1).astype(np.int64)


def merge_groups(
    context: np.ndarray, group_of: np.ndarray, w: np.ndarray, n_groups: int
) -> np.ndarray:
    """Softmax(w)-weighted sum of rows within each group; K x d float32."""
    merged, _ = kernels.merge_kernel(
        np.asarray(context, dtype=np.float32), group_of, w, n_groups
    )
    return merged.astype(np.float32)


def _uniform_center_indices(n_context: int, k: int) -> list[int]:
    """Equidistant indices round(j*(N_c-1)/(K-1)), deduplicated rightward."""
    if k == 1:
        return [0]
    taken: set[int] = set()
    out = []
    for j in range(k):
        idx = math.floor(j * (n_context - 1) / (k - 1) + 0.5)
        while idx in taken:
            idx += 1
        idx = min(idx, n_context - 1)
        while idx in taken:  # fell off the right edge; scan left
            idx -= 1
        taken.add(idx)
        out.append(idx)
    return sorted(out)


def _run(h: HiddenStates, cfg: CompressionConfig) -> CompressionResult:
    context = h.context
    n_c = h.n_context
    q_bar = mean_pool(h.query)
    r = relevance_scores(context, q_bar)
    k = num_compressed_tokens(n_c, cfg.tau)

    if cfg.variant is Variant.UNIFORM_SAMPLE_CENTERS:
        centers = _uniform_center_indices(n_c, k)
    else:
        centers = select_centers(r, k)
    centers_arr = np.asarray(centers, dtype=np.int64)
    is_center = np.zeros(n_c, dtype=bool)
    is_center[centers_arr] = True
    non_idx = np.nonzero(~is_center)[0]

    if cfg.variant is Variant.NO_CONSISTENCY_MERGING:
        group_of = np.full(n_c, DROPPED, dtype=np.int64)
        group_of[centers_arr] = np.arange(k)
        w = np.full(n_c, np.nan, dtype=np.float64)
        w[centers_arr] = r[centers_arr]
        alpha = np.full(n_c, np.nan, dtype=np.float64)
        alpha[centers_arr] = 1.0
        compressed = context[centers_arr].copy()  # bit-exact gather
        compressed.setflags(write=False)
        return CompressionResult(
            compressed=compressed,
            centers=tuple(centers),
            group_of=group_of,
            weights_alpha=alpha,
            weights_w=w,
            relevance=r,
        )

    group_of = np.empty(n_c, dtype=np.int64)
    group_of[centers_arr] = np.arange(k)
    w = np.empty(n_c, dtype=np.float64)
    w[centers_arr] = r[centers_arr]

    if non_idx.size:
        if cfg.variant is Variant.NO_QUERY:
            # assignment and weights use center similarity alone
            v = kernels.cosine_matrix(context[non_idx], context[centers_arr])
        else:
            v = assignment_scores(context[non_idx], context[centers_arr], r[non_idx])
        k_star = assign_tokens(v)
        group_of[non_idx] = k_star
        w[non_idx] = v[np.arange(non_idx.size), k_star]

    merged, alpha = kernels.merge_kernel(context, group_of, w, k)
    compressed = merged.astype(np.float32)
    compressed.setflags(write=False)
    for arr in (group_of, w, alpha, r):
        arr.setflags(write=False)
    return CompressionResult(
        compressed=compressed,
        centers=tuple(centers),
        group_of=group_of,
        weights_alpha=alpha,
        weights_w=w,
        relevance=r,
    )


def compress(h: HiddenStates, cfg: CompressionConfig) -> CompressionResult:
    """Run the default pipeline end to end."""
    if cfg.variant is not Variant.DEFAULT:
        raise ValueError("compress requires the default variant; use compress_ablation")
    return _run(h, cfg)


def compress_ablation(h: HiddenStates, cfg: CompressionConfig) -> CompressionResult:
    """Run one of the three ablation variants."""
    if cfg.variant is Variant.DEFAULT:
        raise ValueError("compress_ablation requires a non-default variant")
    return _run(h, cfg)
