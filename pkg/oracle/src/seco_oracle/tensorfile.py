"""Self-contained reader/writer for the "SECO" tensor container.

Format (all little-endian): magic b"SECO", u32 version (1), u32 ndim,
ndim x u64 dims, then float32 row-major payload. Implemented from the
format description alone, without importing the main package.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"SECO"
VERSION = 1


class TensorFormatError(ValueError):
    pass


def write_tensor(path, array) -> None:
    arr = np.ascontiguousarray(array, dtype="<f4")
    blob = struct.pack("<4sII", MAGIC, VERSION, arr.ndim)
    blob += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    Path(path).write_bytes(blob + arr.tobytes())


def read_tensor(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if len(blob) < 12:
        raise TensorFormatError(f"{path}: header truncated at offset 0")
    magic, version, ndim = struct.unpack_from("<4sII", blob, 0)
    if magic != MAGIC:
        raise TensorFormatError(f"{path}: bad magic at offset 0")
    if version != VERSION:
        raise TensorFormatError(f"{path}: unsupported version {version}")
    end = 12 + 8 * ndim
    if len(blob) < end:
        raise TensorFormatError(f"{path}: dims truncated at offset 12")
    dims = struct.unpack_from(f"<{ndim}Q", blob, 12)
    payload = blob[end:]
    count = 1
    for dim in dims:
        count *= dim
    if len(payload) != 4 * count:
        raise TensorFormatError(
            f"{path}: payload length {len(payload)} != {4 * count} at offset {end}"
        )
    return np.frombuffer(payload, dtype="<f4").reshape(dims).copy()
