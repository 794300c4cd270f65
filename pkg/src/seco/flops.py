"""Analytical multiply-add accounting for compression and generation.

Convention: one multiply-add counts as 2 FLOPs; layer norms, residual
adds, and nonlinearities are ignored; generation assumes a KV cache so
the attention term is linear in the prefix per step. All arithmetic is
exact integers with an explicit 64-bit overflow check.
"""

from __future__ import annotations

from dataclasses import dataclass

INT64_MAX = 2**63 - 1


class FlopsOverflowError(OverflowError):
    """A count exceeded the signed 64-bit range."""


def _check64(value: int, what: str) -> int:
    if value > INT64_MAX:
        raise FlopsOverflowError(f"{what} = {value} exceeds int64")
    return value


@dataclass(frozen=True)
class ModelShape:
    n_layers: int
    d_model: int
    d_ff: int
    n_heads: int
    vocab: int

    def __post_init__(self):
        if min(self.n_layers, self.d_model, self.d_ff, self.n_heads, self.vocab) < 1:
            raise ValueError("all shape fields must be >= 1")
        if self.d_model % self.n_heads != 0:
            raise ValueError(
                f"d_model {self.d_model} not divisible by n_heads {self.n_heads}"
            )


@dataclass(frozen=True)
class FlopsBreakdown:
    encoder_prefill: int
    selection: int
    assignment: int
    merging: int
    generation: int = 0

    @property
    def total(self) -> int:
        return (
            self.encoder_prefill
            + self.selection
            + self.assignment
            + self.merging
            + self.generation
        )

    @property
    def compression_overhead(self) -> int:
        return self.selection + self.assignment + self.merging

    def to_dict(self) -> dict:
        return {
            "encoder_prefill": self.encoder_prefill,
            "selection": self.selection,
            "assignment": self.assignment,
            "merging": self.merging,
            "generation": self.generation,
            "total": self.total,
        }


def transformer_forward_flops(
    shape: ModelShape,
    prefix_len: int,
    new_tokens: int,
    include_vocab: bool = False,
) -> int:
    """FLOPs to push `new_tokens` through the model after `prefix_len`.

    Per layer per token at total position t: 8*d^2 (QKVO projections),
    4*d*t (scores + values against the cache), 4*d*d_ff (feed-forward).
    """
    if prefix_len < 0 or new_tokens < 1:
        raise ValueError("prefix_len must be >= 0 and new_tokens >= 1")
    d, dff = shape.d_model, shape.d_ff
    # sum of t over positions prefix+1 .. prefix+new
    sum_t = new_tokens * prefix_len + new_tokens * (new_tokens + 1) // 2
    per_layer = new_tokens * (8 * d * d + 4 * d * dff) + 4 * d * sum_t
    total = shape.n_layers * per_layer
    if include_vocab:
        total += new_tokens * 2 * d * shape.vocab
    return _check64(total, "transformer forward FLOPs")


def compression_flops(
    shape: ModelShape, l_total: int, l_context: int, k: int, d: int
) -> FlopsBreakdown:
    """Breakdown of one compression pass over an l_total-token input."""
    if not l_total >= l_context >= k >= 1:
        raise ValueError("require l_total >= l_context >= k >= 1")
    encoder = transformer_forward_flops(shape, 0, l_total)
    # per context token: dot with pooled query (2d) + own norm (2d); query norm once
    selection = l_context * 4 * d + 2 * d
    # per (non-center, center) pair: dot + norms (4d) and the relevance product
    assignment = (l_context - k) * k * 4 * d + (l_context - k) * k
    # weighted accumulation (2d per token) + per-token softmax work
    merging = l_context * 2 * d + 3 * l_context
    _check64(encoder + selection + assignment + merging, "compression FLOPs")
    return FlopsBreakdown(
        encoder_prefill=encoder,
        selection=selection,
        assignment=assignment,
        merging=merging,
    )


def generation_flops(
    shape: ModelShape,
    k: int,
    l_query: int,
    l_answer: int,
    include_vocab: bool = False,
) -> int:
    """Autoregressive decoding cost over the compressed prefix k + l_query."""
    if k < 1 or l_query < 0 or l_answer < 1:
        raise ValueError("require k >= 1, l_query >= 0, l_answer >= 1")
    return transformer_forward_flops(shape, k + l_query, l_answer, include_vocab)


def generation_attention_flops(shape: ModelShape, prefix_len: int, new_tokens: int) -> int:
    """Only the cache-attention term (4*d*t summed), for savings ratios."""
    if prefix_len < 0 or new_tokens < 1:
        raise ValueError("prefix_len must be >= 0 and new_tokens >= 1")
    sum_t = new_tokens * prefix_len + new_tokens * (new_tokens + 1) // 2
    return _check64(shape.n_layers * 4 * shape.d_model * sum_t, "attention FLOPs")
