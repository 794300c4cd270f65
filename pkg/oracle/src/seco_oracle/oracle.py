"""Deliberately naive transcription of the compression pipeline.

Plain Python loops over float64 throughout; no code is shared with the
main package. The constants that both sides must agree on are restated
here on purpose so a transcription error in either implementation shows
up as disagreement:

* zero-norm cosine guard 1e-12,
* lowest-index tie-breaking for top-k selection and argmax assignment,
* output rows ordered by ascending center index,
* K = min(max(2, ceil(N_c / tau)), N_c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS_NORM = 1e-12


@dataclass(frozen=True)
class OracleResult:
    k: int
    centers: list
    group_of: list
    weights_alpha: list
    weights_w: list
    relevance: list
    compressed: list  # K rows of d floats


def _cosine(a, b) -> float:
    dot = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(a, b):
        dot += x * y
        na += x * x
        nb += y * y
    c = dot / (math.sqrt(na) * math.sqrt(nb) + EPS_NORM)
    if c > 1.0:
        return 1.0
    if c < -1.0:
        return -1.0
    return c


def oracle_compress(context, query, tau: int) -> OracleResult:
    """Evaluate the whole pipeline step by step with explicit loops."""
    context = [[float(x) for x in row] for row in context]
    query = [[float(x) for x in row] for row in query]
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not context or not query:
        raise ValueError("context and query must be non-empty")
    d = len(context[0])
    if any(len(row) != d for row in context) or any(len(row) != d for row in query):
        raise ValueError("ragged or mismatched row lengths")
    n_c = len(context)

    # query pooling
    q_bar = [0.0] * d
    for row in query:
        for j in range(d):
            q_bar[j] += row[j]
    q_bar = [x / len(query) for x in q_bar]

    # relevance of every context token
    relevance = [_cosine(row, q_bar) for row in context]

    # center count and top-k selection, ties to the lowest index
    k = min(max(2, math.ceil(n_c / tau)), n_c)
    ranked = sorted(range(n_c), key=lambda i: (-relevance[i], i))
    centers = sorted(ranked[:k])

    # assignment of non-centers by relevance times center similarity
    group_of = [-1] * n_c
    for g, c in enumerate(centers):
        group_of[c] = g
    center_set = set(centers)
    for i in range(n_c):
        if i in center_set:
            continue
        best_g = 0
        best_v = -math.inf
        for g, c in enumerate(centers):
            v = relevance[i] * _cosine(context[i], context[c])
            if v > best_v:
                best_g, best_v = g, v
        group_of[i] = best_g

    # consistency weights
    weights_w = [0.0] * n_c
    for i in range(n_c):
        if i in center_set:
            weights_w[i] = relevance[i]
        else:
            c = centers[group_of[i]]
            weights_w[i] = relevance[i] * _cosine(context[i], context[c])

    # per-group softmax merge
    weights_alpha = [0.0] * n_c
    compressed = []
    for g in range(k):
        members = [i for i in range(n_c) if group_of[i] == g]
        top = max(weights_w[i] for i in members)
        z = sum(math.exp(weights_w[i] - top) for i in members)
        row = [0.0] * d
        for i in members:
            a = math.exp(weights_w[i] - top) / z
            weights_alpha[i] = a
            for j in range(d):
                row[j] += a * context[i][j]
        compressed.append(row)

    return OracleResult(
        k=k,
        centers=centers,
        group_of=group_of,
        weights_alpha=weights_alpha,
        weights_w=weights_w,
        relevance=relevance,
        compressed=compressed,
    )
