"""Dense matrix conventions and shared numeric primitives.

Storage is 32-bit floats (row-major numpy arrays, validated finite and
frozen at construction); reductions (dot products, means, softmax sums)
run in 64-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Guard for zero vectors in every cosine denominator.
EPS_NORM = 1e-12


class DimensionMismatchError(ValueError):
    """Operand shapes are incompatible."""


class EmptyInputError(ValueError):
    """An operation received zero rows/elements."""


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Validate and freeze a 2-D float32 matrix.

    Raises ValueError on non-2-D input or non-finite entries.
    """
    arr = np.array(data, dtype=np.float32, order="C")
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name}: expected 2-D data, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise EmptyInputError(f"{name}: empty matrix of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: non-finite entries are not allowed")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HiddenStates:
    """Encoder hidden states split into context rows and query rows."""

    context: np.ndarray
    query: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "context", as_matrix(self.context, "context"))
        object.__setattr__(self, "query", as_matrix(self.query, "query"))
        if self.context.shape[1] != self.query.shape[1]:
            raise DimensionMismatchError(
                f"context dim {self.context.shape[1]} != query dim {self.query.shape[1]}"
            )

    @property
    def n_context(self) -> int:
        return self.context.shape[0]

    @property
    def n_query(self) -> int:
        return self.query.shape[0]

    @property
    def dim(self) -> int:
        return self.context.shape[1]


def make_rng(seed: int = 0) -> np.random.Generator:
    """Deterministic generator; identical seed gives an identical stream."""
    return np.random.default_rng(np.uint64(seed))


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if a.size == 0:
        raise EmptyInputError("cosine_similarity of empty vectors")
    denom = np.linalg.norm(a) * np.linalg.norm(b) + EPS_NORM
    return float(np.clip(a @ b / denom, -1.0, 1.0))


def mean_pool(rows) -> np.ndarray:
    """Component-wise arithmetic mean of the rows; 64-bit accumulation."""
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        arr = np.atleast_2d(arr)
    if arr.shape[0] == 0:
        raise EmptyInputError("mean_pool of zero rows")
    return arr.mean(axis=0)


def softmax(w) -> np.ndarray:
    """Max-shifted softmax; output sums to 1 with all entries positive."""
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.size == 0:
        raise EmptyInputError("softmax of empty input")
    if not np.all(np.isfinite(w)):
        raise ValueError("softmax input must be finite")
    e = np.exp(w - w.max())
    return e / e.sum()
