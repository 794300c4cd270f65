"""Brute-force reference compressor used as the in-suite oracle.

Deliberately naive: plain Python loops and math over float64, no numpy
vector paths and no code shared with the package under test. The only
agreed constants are the zero-norm guard (1e-12), lowest-index
tie-breaking, and ascending-center output order.
"""

from __future__ import annotations

import math

EPS = 1e-12


def _cos(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    c = dot / (na * nb + EPS)
    return max(-1.0, min(1.0, c))


def reference_compress(context, query, tau):
    """Step-by-step transcription of the compression pipeline.

    `context` and `query` are sequences of float rows. Returns a dict
    with centers, group_of, alpha, w, relevance, and compressed rows.
    """
    context = [[float(x) for x in row] for row in context]
    query = [[float(x) for x in row] for row in query]
    n_c, d = len(context), len(context[0])

    q_bar = [sum(row[j] for row in query) / len(query) for j in range(d)]
    r = [_cos(row, q_bar) for row in context]

    k = min(max(2, math.ceil(n_c / tau)), n_c)

    order = sorted(range(n_c), key=lambda i: (-r[i], i))
    centers = sorted(order[:k])

    group_of = [None] * n_c
    for g, c in enumerate(centers):
        group_of[c] = g
    for i in range(n_c):
        if group_of[i] is not None:
            continue
        best_g, best_v = 0, -math.inf
        for g, c in enumerate(centers):
            v = r[i] * _cos(context[i], context[c])
            if v > best_v:
                best_g, best_v = g, v
        group_of[i] = best_g

    w = [0.0] * n_c
    for i in range(n_c):
        if i in centers:
            w[i] = r[i]
        else:
            c = centers[group_of[i]]
            w[i] = r[i] * _cos(context[i], context[c])

    alpha = [0.0] * n_c
    compressed = []
    for g in range(k):
        members = [i for i in range(n_c) if group_of[i] == g]
        m = max(w[i] for i in members)
        z = sum(math.exp(w[i] - m) for i in members)
        row = [0.0] * d
        for i in members:
            a = math.exp(w[i] - m) / z
            alpha[i] = a
            for j in range(d):
                row[j] += a * context[i][j]
        compressed.append(row)

    return {
        "k": k,
        "centers": centers,
        "group_of": group_of,
        "alpha": alpha,
        "w": w,
        "relevance": r,
        "compressed": compressed,
    }
