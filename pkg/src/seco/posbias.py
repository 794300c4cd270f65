"""Numerical checks for the position-bias properties of the compressor.

Monte Carlo estimators for positional-residual variance under iid,
correlated, sinusoidal, and rotary positional components; permutation
invariance of the compressed multiset; and the structural check that the
whole pipeline is a group-restricted row-stochastic linear map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .compress import CompressionConfig, CompressionResult, compress
from .tensor import HiddenStates, softmax


class StructuralViolationError(RuntimeError):
    """The compression output violates its own linear-map structure."""


# ---------------------------------------------------------------------------
# positional encodings


def sinusoidal_pe(position, dim: int, base: float = 10000.0) -> np.ndarray:
    """Interleaved sin/cos encoding of one position; `dim` must be even."""
    if dim % 2 != 0 or dim < 2:
        raise ValueError(f"dim must be even and >= 2, got {dim}")
    j = np.arange(dim // 2, dtype=np.float64)
    angles = position / base ** (2.0 * j / dim)
    out = np.empty(dim, dtype=np.float64)
    out[0::2] = np.sin(angles)
    out[1::2] = np.cos(angles)
    return out


def rope_rotate(h, position, base: float = 10000.0) -> np.ndarray:
    """Rotate consecutive pairs of `h` by angle position / base^(2j/d)."""
    h = np.asarray(h, dtype=np.float64).ravel()
    d = h.shape[0]
    if d % 2 != 0 or d < 2:
        raise ValueError(f"vector length must be even and >= 2, got {d}")
    j = np.arange(d // 2, dtype=np.float64)
    theta = position / base ** (2.0 * j / d)
    c, s = np.cos(theta), np.sin(theta)
    even, odd = h[0::2], h[1::2]
    out = np.empty_like(h)
    out[0::2] = c * even - s * odd
    out[1::2] = s * even + c * odd
    return out


def insert_position(seq_len: int, beta: float) -> int:
    """Starting position id for inserted tokens: floor(L * beta) + 1."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    if seq_len < 1:
        raise ValueError("seq_len must be >= 1")
    return math.floor(seq_len * beta) + 1


# ---------------------------------------------------------------------------
# noise models and reports


@dataclass(frozen=True)
class NoiseSpec:
    """Isotropic positional noise, optionally lag-correlated.

    correlation "none" means iid draws; "exponential" means
    rho(lag) = gamma**lag realized by a per-dimension AR(1) process.
    """

    sigma_p: float = 1.0
    correlation: str = "none"
    gamma: float = 0.0

    def __post_init__(self):
        if self.correlation not in ("none", "exponential"):
            raise ValueError(f"unknown correlation family {self.correlation!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")


@dataclass(frozen=True)
class ResidualReport:
    group_size: int
    trials: int
    empirical_mse: float
    predicted_mse: float
    relative_error: float
    mean_residual_norm: float = 0.0

    def to_dict(self) -> dict:
        return {
            "group_size": self.group_size,
            "trials": self.trials,
            "empirical_mse": self.empirical_mse,
            "predicted_mse": self.predicted_mse,
            "relative_error": self.relative_error,
            "mean_residual_norm": self.mean_residual_norm,
        }


def _residual_report(eps: np.ndarray, predicted: float, group_size: int) -> ResidualReport:
    empirical = float(np.mean(np.sum(eps * eps, axis=1)))
    rel = abs(empirical - predicted) / predicted if predicted > 0 else abs(empirical)
    return ResidualReport(
        group_size=group_size,
        trials=eps.shape[0],
        empirical_mse=empirical,
        predicted_mse=predicted,
        relative_error=rel,
        mean_residual_norm=float(np.linalg.norm(eps.mean(axis=0))),
    )


def residual_variance_mc(
    group_size: int,
    noise: NoiseSpec,
    dim: int,
    weights: str = "uniform",
    trials: int = 10_000,
    rng: np.random.Generator | None = None,
) -> ResidualReport:
    """Monte Carlo estimate of E||sum_i alpha_i p_i||^2 for iid noise.

    Closed-form prediction: (sum alpha_i^2) * d * sigma_p^2, which is
    tr(Sigma_p)/|G| under uniform weights.
    """
    if group_size < 1 or trials < 1:
        raise ValueError("group_size and trials must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(0)
    if weights == "uniform":
        alpha = np.full(group_size, 1.0 / group_size)
    elif weights == "random-softmax":
        alpha = softmax(rng.standard_normal(group_size))
    else:
        raise ValueError(f"unknown weighting {weights!r}")
    p = rng.standard_normal((trials, group_size, dim)) * noise.sigma_p
    eps = np.einsum("g,tgd->td", alpha, p)
    predicted = float(np.sum(alpha**2)) * dim * noise.sigma_p**2
    return _residual_report(eps, predicted, group_size)


def correlated_residual_mc(
    group_size: int,
    gamma: float,
    sigma_p: float = 1.0,
    dim: int = 8,
    trials: int = 10_000,
    rng: np.random.Generator | None = None,
) -> ResidualReport:
    """Residual variance under AR(1) noise with rho(lag) = gamma**lag.

    Uniform weights; prediction (sigma_p^2 d / g^2) * sum_{ij} gamma^|i-j|.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")
    rng = rng if rng is not None else np.random.default_rng(0)
    z = rng.standard_normal((trials, group_size, dim))
    p = np.empty_like(z)
    p[:, 0] = z[:, 0]
    scale = math.sqrt(1.0 - gamma**2)
    for t in range(1, group_size):
        p[:, t] = gamma * p[:, t - 1] + scale * z[:, t]
    p *= sigma_p
    eps = p.mean(axis=1)
    lags = np.abs(np.subtract.outer(np.arange(group_size), np.arange(group_size)))
    double_sum = float(np.sum(gamma ** lags.astype(np.float64)))
    predicted = sigma_p**2 * dim / group_size**2 * double_sum
    return _residual_report(eps, predicted, group_size)


# ---------------------------------------------------------------------------
# oscillatory residual scans


@dataclass(frozen=True)
class SinusoidalScanReport:
    points: tuple[tuple[int, float], ...]  # (group size, empirical mse)
    slope: float

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "slope": self.slope}


def sinusoidal_residual_scan(
    group_sizes,
    omega: float = 1.0,
    dim: int = 8,
    trials: int = 10_000,
    rng: np.random.Generator | None = None,
) -> SinusoidalScanReport:
    """Mean squared residual of uniform-averaged sin(i*omega) terms.

    Group member positions are sampled uniformly from a range ten times
    the largest group; every dimension pair shares the same phase. Also
    fits the log-log slope of mse versus group size.
    """
    group_sizes = list(group_sizes)
    if any(g < 2 for g in group_sizes):
        raise ValueError("group sizes must be >= 2")
    rng = rng if rng is not None else np.random.default_rng(0)
    pos_range = 10 * max(group_sizes)
    points = []
    for g in group_sizes:
        pos = rng.integers(0, pos_range, size=(trials, g))
        e = np.sin(pos * omega).mean(axis=1)
        mse = float((dim // 2) * np.mean(e**2))
        points.append((g, mse))
    sizes = np.array([p[0] for p in points], dtype=np.float64)
    mses = np.array([p[1] for p in points], dtype=np.float64)
    if np.all(mses > 0):
        slope = float(np.polyfit(np.log(sizes), np.log(mses), 1)[0])
    else:
        slope = 0.0
    return SinusoidalScanReport(points=tuple(points), slope=slope)


@dataclass(frozen=True)
class RopeScanReport:
    cells: tuple[tuple[float, int, float], ...]  # (spread, group size, mean norm)
    coef_spread: float
    coef_group: float

    def to_dict(self) -> dict:
        return {
            "cells": [list(c) for c in self.cells],
            "coef_spread": self.coef_spread,
            "coef_group": self.coef_group,
        }


def rope_residual_scan(
    angular_spreads,
    group_sizes,
    dim: int = 8,
    trials: int = 2_000,
    rng: np.random.Generator | None = None,
) -> RopeScanReport:
    """Residual of rotating group members by angles spread over [0, dtheta].

    Semantic vectors are a shared unit direction plus per-token Gaussian
    noise; the residual sum_i alpha_i (R_i - I) h_i is averaged over
    trials per (spread, group size) cell, then fitted by least squares to
    c1 * dtheta + c2 / sqrt(group size).
    """
    angular_spreads = list(angular_spreads)
    group_sizes = list(group_sizes)
    if any(s < 0 for s in angular_spreads):
        raise ValueError("angular spreads must be >= 0")
    if dim % 2 != 0:
        raise ValueError("dim must be even")
    rng = rng if rng is not None else np.random.default_rng(0)
    cells = []
    for dtheta in angular_spreads:
        for g in group_sizes:
            mu = rng.standard_normal((trials, 1, dim))
            mu /= np.linalg.norm(mu, axis=2, keepdims=True)
            h = mu + rng.standard_normal((trials, g, dim))
            theta = rng.uniform(0.0, dtheta, size=(trials, g, 1)) if dtheta > 0 else np.zeros((trials, g, 1))
            c, s = np.cos(theta), np.sin(theta)
            he, ho = h[:, :, 0::2], h[:, :, 1::2]
            res_e = (c * he - s * ho - he).mean(axis=1)
            res_o = (s * he + c * ho - ho).mean(axis=1)
            norms = np.sqrt(np.sum(res_e**2 + res_o**2, axis=1))
            cells.append((float(dtheta), int(g), float(norms.mean())))
    x = np.array([[dt, 1.0 / math.sqrt(g)] for dt, g, _ in cells])
    y = np.array([v for _, _, v in cells])
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    return RopeScanReport(
        cells=tuple(cells), coef_spread=float(coef[0]), coef_group=float(coef[1])
    )


# ---------------------------------------------------------------------------
# pipeline-level checks


@dataclass(frozen=True)
class PermutationReport:
    trials_requested: int
    trials_run: int
    ties_skipped: int
    max_deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "trials_requested": self.trials_requested,
            "trials_run": self.trials_run,
            "ties_skipped": self.ties_skipped,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }


def _has_ties(h: HiddenStates, cfg: CompressionConfig) -> bool:
    """Exact duplicates in relevance or per-row assignment maxima."""
    res = compress(h, cfg)
    r = res.relevance
    if np.unique(r).size != r.size:
        return True
    # duplicated context rows always create assignment ties
    rows = np.asarray(h.context, dtype=np.float64)
    return np.unique(rows, axis=0).shape[0] != rows.shape[0]


def _canonical_rows(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    order = np.lexsort(m.T[::-1])
    return m[order]


def permutation_invariance_check(
    h: HiddenStates,
    cfg: CompressionConfig,
    trials: int = 100,
    rng: np.random.Generator | None = None,
    tolerance: float = 1e-5,
) -> PermutationReport:
    """Compare compressed multisets before and after context permutations."""
    rng = rng if rng is not None else np.random.default_rng(0)
    if _has_ties(h, cfg):
        return PermutationReport(
            trials_requested=trials,
            trials_run=0,
            ties_skipped=trials,
            max_deviation=0.0,
            passed=True,
        )
    base = _canonical_rows(compress(h, cfg).compressed)
    max_dev = 0.0
    for _ in range(trials):
        perm = rng.permutation(h.n_context)
        permuted = HiddenStates(context=h.context[perm], query=h.query)
        other = _canonical_rows(compress(permuted, cfg).compressed)
        max_dev = max(max_dev, float(np.max(np.abs(base - other))))
    return PermutationReport(
        trials_requested=trials,
        trials_run=trials,
        ties_skipped=0,
        max_deviation=max_dev,
        passed=max_dev <= tolerance,
    )


@dataclass(frozen=True)
class NystromReport:
    k: int
    n_context: int
    max_reconstruction_error: float
    max_row_sum_error: float
    support_ok: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_context": self.n_context,
            "max_reconstruction_error": self.max_reconstruction_error,
            "max_row_sum_error": self.max_row_sum_error,
            "support_ok": self.support_ok,
        }


def nystrom_assignment_matrix(
    result: CompressionResult, context: np.ndarray
) -> tuple[np.ndarray, NystromReport]:
    """Materialize the K x N_c assignment matrix A and verify A @ H.

    A[k, i] = alpha_i on group k's members and 0 elsewhere; each row must
    sum to 1 and reconstruct the corresponding compressed row.
    """
    n_c = context.shape[0]
    k = result.k
    a = np.zeros((k, n_c), dtype=np.float64)
    members = result.group_of >= 0
    a[result.group_of[members], np.nonzero(members)[0]] = result.weights_alpha[members]
    recon = a @ np.asarray(context, dtype=np.float64)
    max_err = float(np.max(np.abs(recon - result.compressed.astype(np.float64))))
    row_err = float(np.max(np.abs(a.sum(axis=1) - 1.0)))
    support_ok = True
    for g in range(k):
        expected = set(np.nonzero(result.group_of == g)[0].tolist())
        actual = set(np.nonzero(a[g] != 0.0)[0].tolist())
        if not actual <= expected:
            support_ok = False
    report = NystromReport(
        k=k,
        n_context=n_c,
        max_reconstruction_error=max_err,
        max_row_sum_error=row_err,
        support_ok=support_ok,
    )
    if max_err > 1e-5 or row_err > 1e-6 or not support_ok:
        raise StructuralViolationError(
            f"assignment-matrix verification failed: {report.to_dict()}"
        )
    return a, report
