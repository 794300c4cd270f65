"""Query-aware semantic context compression with a position-bias lab."""

from .compress import (
    CompressionConfig,
    CompressionResult,
    Variant,
    compress,
    compress_ablation,
    num_compressed_tokens,
)
from .kernels import BACKEND
from .tensor import HiddenStates, cosine_similarity, make_rng, mean_pool, softmax
from .tensorfile import read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CompressionConfig",
    "CompressionResult",
    "HiddenStates",
    "Variant",
    "compress",
    "compress_ablation",
    "cosine_similarity",
    "make_rng",
    "mean_pool",
    "num_compressed_tokens",
    "read_tensor",
    "softmax",
    "write_tensor",
    "__version__",
]
