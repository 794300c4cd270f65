"""Synthetic token generators: semantic component plus positional part."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .posbias import NoiseSpec, rope_rotate, sinusoidal_pe


@dataclass(frozen=True)
class SyntheticTokenModel:
    """Generator spec for token embeddings h_i = s_i + p_i.

    For `pe_family="rotary"` the positional part is multiplicative
    (h_i is s_i rotated by position-dependent angles) and `dim` must be
    even. `semantic_gen` is "gaussian-clusters" or "fixed" (unit rows).
    """

    n_tokens: int
    dim: int
    n_query: int = 4
    semantic_gen: str = "gaussian-clusters"
    n_clusters: int = 4
    pe_family: str = "none"
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        if self.n_tokens < 1 or self.dim < 1 or self.n_query < 1:
            raise ValueError("n_tokens, dim, and n_query must be >= 1")
        if self.semantic_gen not in ("gaussian-clusters", "fixed"):
            raise ValueError(f"unknown semantic generator {self.semantic_gen!r}")
        if self.pe_family not in ("none", "additive-sinusoidal", "rotary"):
            raise ValueError(f"unknown PE family {self.pe_family!r}")
        if self.pe_family == "rotary" and self.dim % 2 != 0:
            raise ValueError("rotary positional encoding requires even dim")


def generate(model: SyntheticTokenModel, rng: np.random.Generator) -> dict:
    """Draw context/query/semantic matrices and the generator metadata."""
    n, d = model.n_tokens, model.dim
    if model.semantic_gen == "gaussian-clusters":
        means = rng.standard_normal((model.n_clusters, d)) * 2.0
        assign = rng.integers(0, model.n_clusters, size=n)
        semantic = means[assign] + 0.3 * rng.standard_normal((n, d))
        query_mean = means[int(rng.integers(0, model.n_clusters))]
        query = query_mean + 0.3 * rng.standard_normal((model.n_query, d))
        meta_means = means.tolist()
    else:
        semantic = rng.standard_normal((n, d))
        semantic /= np.linalg.norm(semantic, axis=1, keepdims=True)
        query = rng.standard_normal((model.n_query, d))
        query /= np.linalg.norm(query, axis=1, keepdims=True)
        meta_means = []

    if model.pe_family == "none":
        context = semantic.copy()
    elif model.pe_family == "additive-sinusoidal":
        pe = np.stack([sinusoidal_pe(i, d if d % 2 == 0 else d + 1)[:d] for i in range(n)])
        context = semantic + model.noise.sigma_p * pe
    else:  # rotary
        context = np.stack([rope_rotate(semantic[i], i) for i in range(n)])

    return {
        "context": context.astype(np.float32),
        "query": query.astype(np.float32),
        "semantic": semantic.astype(np.float32),
        "metadata": {
            "n_tokens": n,
            "dim": d,
            "n_query": model.n_query,
            "semantic_gen": model.semantic_gen,
            "n_clusters": model.n_clusters,
            "cluster_means": meta_means,
            "pe_family": model.pe_family,
            "sigma_p": model.noise.sigma_p,
        },
    }
