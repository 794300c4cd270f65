"""Cross-validation of the oracle and bindings against the main package."""

import json
import subprocess
import sys

import numpy as np
import pytest

from seco_oracle import bind_compress, oracle_compress, read_tensor, write_tensor
from seco_oracle.bindings import CompressorError

seco = pytest.importorskip("seco", reason="main package must be installed")


def test_oracle_matches_primary_on_1000_instances():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        d = int(rng.integers(2, 33))
        tau = int(rng.choice((2, 4, 8, 16, 32)))
        ctx = rng.standard_normal((n, d))
        qry = rng.standard_normal((int(rng.integers(1, 4)), d))
        primary = seco.compress(
            seco.HiddenStates(context=ctx, query=qry), seco.CompressionConfig(tau=tau)
        )
        ref = oracle_compress(ctx, qry, tau)
        assert list(primary.centers) == ref.centers
        assert primary.group_of.tolist() == ref.group_of
        dev = np.max(np.abs(primary.compressed - np.array(ref.compressed)))
        assert dev <= 1e-4


def test_binding_bit_equals_cli(tmp_path):
    rng = np.random.default_rng(7)
    ctx = rng.standard_normal((24, 6)).astype(np.float32)
    qry = rng.standard_normal((3, 6)).astype(np.float32)
    compressed, provenance = bind_compress(ctx, qry, tau=4)

    write_tensor(tmp_path / "ctx.seco", ctx)
    write_tensor(tmp_path / "qry.seco", qry)
    out = tmp_path / "out.seco"
    subprocess.run(
        [sys.executable, "-m", "seco.cli", "compress", str(tmp_path / "ctx.seco"),
         str(tmp_path / "qry.seco"), "--tau", "4", "--out", str(out)],
        check=True, capture_output=True,
    )
    cli_compressed = read_tensor(out)
    assert np.array_equal(
        compressed.view(np.uint32), cli_compressed.view(np.uint32)
    )
    cli_prov = json.loads((tmp_path / "out.seco.provenance.json").read_text())
    assert provenance["centers"] == cli_prov["centers"]
    assert provenance["group_of"] == cli_prov["group_of"]


def test_binding_shapes_and_non_contiguous():
    rng = np.random.default_rng(8)
    ctx = rng.standard_normal((40, 16)).astype(np.float32)[::2]  # non-contiguous view
    qry = rng.standard_normal((2, 16)).astype(np.float32)
    compressed, prov = bind_compress(ctx, qry, tau=8)
    assert compressed.shape == (max(2, -(-20 // 8)), 16)
    assert len(prov["group_of"]) == 20


def test_binding_dimension_mismatch_raises():
    with pytest.raises(CompressorError):
        bind_compress(np.zeros((4, 3), np.float32), np.zeros((2, 5), np.float32), tau=2)


def test_binding_rejects_1d():
    with pytest.raises(ValueError):
        bind_compress(np.zeros(4, np.float32), np.zeros((2, 4), np.float32), tau=2)
