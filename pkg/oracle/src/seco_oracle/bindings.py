"""Host-buffer binding onto the main compressor's CLI surface.

The compressor is reached exclusively through its published interfaces:
tensors are serialized to the "SECO" container and handed to the `seco`
command, so the results here are byte-identical to `seco compress`.
Non-contiguous or non-float32 inputs are transparently copied.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from .tensorfile import read_tensor, write_tensor


class CompressorError(RuntimeError):
    """The compressor CLI rejected the input; carries its message."""


def _seco_command() -> list[str]:
    exe = shutil.which("seco")
    if exe:
        return [exe]
    return [sys.executable, "-m", "seco.cli"]


def _as_buffer(array, name: str) -> np.ndarray:
    arr = np.asarray(array)
    if arr.ndim != 2:
        raise ValueError(f"{name}: expected a 2-D buffer, got ndim={arr.ndim}")
    return np.ascontiguousarray(arr, dtype=np.float32)


def bind_compress(
    context, query, tau: int, variant: str = "default"
) -> tuple[np.ndarray, dict]:
    """Compress host buffers; returns (K x d float32, provenance dict)."""
    ctx = _as_buffer(context, "context")
    qry = _as_buffer(query, "query")
    with tempfile.TemporaryDirectory(prefix="seco-bind-") as tmp:
        tmp = Path(tmp)
        write_tensor(tmp / "context.seco", ctx)
        write_tensor(tmp / "query.seco", qry)
        out = tmp / "out.seco"
        cmd = _seco_command() + [
            "compress" if variant == "default" else "ablate",
            str(tmp / "context.seco"),
            str(tmp / "query.seco"),
            "--tau",
            str(tau),
            "--variant",
            variant,
            "--out",
            str(out),
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            raise CompressorError(proc.stderr.strip() or f"exit code {proc.returncode}")
        compressed = read_tensor(out)
        provenance = json.loads((tmp / "out.seco.provenance.json").read_text())
    return compressed, provenance
