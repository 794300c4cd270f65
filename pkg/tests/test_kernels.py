"""Parity between the compiled kernels and the numpy fallback."""

import numpy as np
import pytest

from seco import kernels
from seco.kernels import python_impl
from seco.tensor import make_rng

needs_ext = pytest.mark.skipif(
    kernels.BACKEND != "cython", reason="compiled extension not built"
)


def test_backend_identified():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
def test_cosine_matrix_parity():
    rng = make_rng(0)
    a = rng.standard_normal((37, 19)).astype(np.float32)
    b = rng.standard_normal((11, 19)).astype(np.float32)
    assert np.allclose(
        kernels.cosine_matrix(a, b), python_impl.cosine_matrix(a, b), atol=1e-12
    )


@needs_ext
def test_relevance_parity():
    rng = make_rng(1)
    ctx = rng.standard_normal((50, 16)).astype(np.float32)
    q = rng.standard_normal(16)
    assert np.allclose(
        kernels.relevance_kernel(ctx, q), python_impl.relevance_kernel(ctx, q), atol=1e-12
    )


@needs_ext
def test_merge_parity():
    rng = make_rng(2)
    ctx = rng.standard_normal((30, 8)).astype(np.float32)
    groups = rng.integers(0, 5, size=30)
    groups[:5] = np.arange(5)  # every group inhabited
    w = rng.standard_normal(30)
    m1, a1 = kernels.merge_kernel(ctx, groups, w, 5)
    m2, a2 = python_impl.merge_kernel(ctx, groups, w, 5)
    assert np.allclose(m1, m2, atol=1e-12)
    assert np.allclose(a1, a2, atol=1e-12)


@needs_ext
def test_merge_dropped_tokens_parity():
    rng = make_rng(3)
    ctx = rng.standard_normal((10, 4)).astype(np.float32)
    groups = np.array([0, 1, -1, -1, 0, 1, -1, 0, -1, 1])
    w = rng.standard_normal(10)
    m1, a1 = kernels.merge_kernel(ctx, groups, w, 2)
    m2, a2 = python_impl.merge_kernel(ctx, groups, w, 2)
    assert np.allclose(m1, m2, atol=1e-12)
    assert np.array_equal(np.isnan(a1), np.isnan(a2))
