"""Acceptance suite: one test per release criterion.

Run with `pytest tests/test_acceptance.py -s` to see one PASS line per
criterion. Tolerances are fixed here and must not be loosened.
"""

import math

import numpy as np
import pytest

from seco.compress import (
    CompressionConfig,
    Variant,
    compress,
    compress_ablation,
    num_compressed_tokens,
    select_centers,
)
from seco.flops import (
    ModelShape,
    compression_flops,
    generation_attention_flops,
)
from seco.posbias import (
    NoiseSpec,
    correlated_residual_mc,
    insert_position,
    nystrom_assignment_matrix,
    permutation_invariance_check,
    residual_variance_mc,
    rope_residual_scan,
    sinusoidal_residual_scan,
)
from seco.tensor import HiddenStates, make_rng
from seco.tensorfile import read_tensor, write_tensor

from reference_pipeline import reference_compress


def _report(name: str):
    print(f"PASS {name}")


def _random_states(rng, n, d, n_q=3):
    return HiddenStates(
        context=rng.standard_normal((n, d)), query=rng.standard_normal((n_q, d))
    )


def test_row_count_law():
    rng = make_rng(0)
    for n_c in range(1, 257):
        h = _random_states(rng, n_c, 4)
        for tau in (1, 2, 4, 8, 16, 32):
            res = compress(h, CompressionConfig(tau=tau))
            expected = min(max(2, math.ceil(n_c / tau)), n_c)
            assert res.k == expected == num_compressed_tokens(n_c, tau)
    _report("row-count law (exhaustive N_c in [1,256], tau in {1..32})")


def test_pipeline_oracle_equivalence():
    rng = make_rng(1)
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        d = int(rng.integers(2, 33))
        tau = int(rng.choice((2, 4, 8, 16, 32)))
        ctx = rng.standard_normal((n, d))
        qry = rng.standard_normal((int(rng.integers(1, 4)), d))
        res = compress(HiddenStates(context=ctx, query=qry), CompressionConfig(tau=tau))
        ref = reference_compress(ctx, qry, tau)
        assert list(res.centers) == ref["centers"]
        assert res.group_of.tolist() == ref["group_of"]
        assert np.max(np.abs(res.compressed - np.array(ref["compressed"]))) <= 1e-4
    _report("pipeline oracle equivalence (1000 instances, <=1e-4)")


def test_permutation_invariance():
    rng = make_rng(2)
    h = _random_states(rng, 32, 8)
    report = permutation_invariance_check(h, CompressionConfig(tau=4), trials=100, rng=rng)
    assert report.trials_run == 100
    assert report.max_deviation <= 1e-5
    assert report.passed
    _report("permutation invariance (100/100 trials, deviation <= 1e-5)")


def test_noise_attenuation():
    rng = make_rng(3)
    for g in (4, 16, 64):
        rep = residual_variance_mc(g, NoiseSpec(sigma_p=1.0), dim=8, trials=10_000, rng=rng)
        assert rep.relative_error < 0.05, (g, rep)
    rep = residual_variance_mc(
        8, NoiseSpec(sigma_p=1.0), dim=8, weights="random-softmax", trials=10_000, rng=rng
    )
    assert rep.relative_error < 0.05
    _report("noise attenuation closed form (uniform + random-softmax, 5%)")


def test_correlated_noise_rate():
    rng = make_rng(4)
    scaled = [
        correlated_residual_mc(g, 0.5, 1.0, 8, 10_000, rng).empirical_mse * g
        for g in (4, 16, 64)
    ]
    assert max(scaled) <= 2.0 * min(scaled)
    hand = correlated_residual_mc(2, 0.5, 1.0, 1, 10_000, rng)
    assert hand.predicted_mse == pytest.approx(0.75)
    assert hand.relative_error < 0.05
    _report("correlated-noise rate (2x band + hand-computed 0.75 within 5%)")


def test_sinusoidal_slope():
    rep = sinusoidal_residual_scan(
        (4, 16, 64, 256), omega=1.0, dim=8, trials=10_000, rng=make_rng(5)
    )
    assert -1.2 <= rep.slope <= -0.8, rep.slope
    _report(f"sinusoidal residual log-log slope {rep.slope:.3f} in [-1.2, -0.8]")


def test_rope_residual_behavior():
    rng = make_rng(6)
    rep = rope_residual_scan((0.01, 0.1, 0.5), (4, 16, 64, 256), dim=8, trials=2_000, rng=rng)
    by_cell = {(dt, g): v for dt, g, v in rep.cells}
    assert by_cell[(0.01, 64)] < by_cell[(0.1, 64)] < by_cell[(0.5, 64)]
    assert by_cell[(0.1, 256)] <= by_cell[(0.1, 4)]
    assert rep.coef_spread >= 0.0 and rep.coef_group >= 0.0
    _report("rope residual monotonicities + nonnegative two-term fit")


def test_nystrom_structure():
    rng = make_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 65))
        d = int(rng.integers(2, 33))
        h = _random_states(rng, n, d, n_q=2)
        res = compress(h, CompressionConfig(tau=int(rng.choice((2, 4, 8, 16, 32)))))
        _, rep = nystrom_assignment_matrix(res, h.context)
        assert rep.max_reconstruction_error <= 1e-5
        assert rep.max_row_sum_error <= 1e-6
    _report("assignment-matrix structure (1000 instances, A@H <= 1e-5, rows sum to 1)")


def test_ablation_contracts():
    rng = make_rng(8)
    for _ in range(100):
        n = int(rng.integers(3, 49))
        d = int(rng.integers(2, 17))
        tau = int(rng.choice((2, 4, 8)))
        h = _random_states(rng, n, d)

        res = compress_ablation(
            h, CompressionConfig(tau=tau, variant=Variant.NO_CONSISTENCY_MERGING)
        )
        top = select_centers(res.relevance, res.k)
        assert np.array_equal(res.compressed, h.context[top])

        res = compress_ablation(
            h, CompressionConfig(tau=tau, variant=Variant.UNIFORM_SAMPLE_CENTERS)
        )
        k = res.k
        expected = sorted({math.floor(j * (n - 1) / (k - 1) + 0.5) for j in range(k)}) if k > 1 else [0]
        assert list(res.centers) == expected

        res = compress_ablation(h, CompressionConfig(tau=tau, variant=Variant.NO_QUERY))
        from seco.kernels import cosine_matrix

        centers = np.asarray(res.centers)
        non = np.setdiff1d(np.arange(n), centers)
        if non.size:
            s = cosine_matrix(h.context[non], h.context[centers])
            assert np.array_equal(res.group_of[non], np.argmax(s, axis=1))
    _report("ablation contracts (gather / equidistant / similarity-only, 100 instances)")


def test_cost_model():
    shape = ModelShape(n_layers=12, d_model=512, d_ff=2048, n_heads=8, vocab=32000)
    b = compression_flops(shape, 1024, 1024, num_compressed_tokens(1024, 16), 512)
    assert b.compression_overhead / b.encoder_prefill < 0.01

    l_c, tau, l_q = 8192, 16, 32
    k = num_compressed_tokens(l_c, tau)
    for l_a in (1, 8, 64):
        got = generation_attention_flops(shape, k + l_q, l_a) / generation_attention_flops(
            shape, l_c + l_q, l_a
        )
        assert got == pytest.approx((k + l_q) / (l_c + l_q), rel=0.10)
    _report("cost model (overhead < 1% of prefill; attention ratio within 10%)")


def test_insert_position_formula():
    for length in range(1, 10_001):
        for beta in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert insert_position(length, beta) == math.floor(length * beta) + 1
    _report("insert position formula (L <= 1e4, five betas)")


def test_format_round_trip(tmp_path):
    rng = make_rng(9)
    for i in range(1000):
        shape = tuple(int(x) for x in rng.integers(1, 9, size=int(rng.integers(1, 4))))
        arr = rng.standard_normal(shape).astype(np.float32)
        path = tmp_path / "t.seco"
        write_tensor(path, arr)
        back = read_tensor(path)
        assert np.array_equal(back.view(np.uint32), arr.view(np.uint32))

    from seco.cli import main

    write_tensor(tmp_path / "ctx.seco", rng.standard_normal((24, 6)).astype(np.float32))
    write_tensor(tmp_path / "qry.seco", rng.standard_normal((2, 6)).astype(np.float32))
    outs = []
    for name in ("o1.seco", "o2.seco"):
        assert main(["compress", str(tmp_path / "ctx.seco"), str(tmp_path / "qry.seco"),
                     "--tau", "4", "--out", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    _report("tensor-file round trip (1000 files bit-exact) + deterministic CLI")
