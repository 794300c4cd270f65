"""Minimal binary tensor container.

Layout (all integers little-endian):

    offset 0   magic   4 bytes  b"SECO"
    offset 4   version u32      1
    offset 8   ndim    u32
    offset 12  dims    ndim x u64
    then       payload float32, row-major

Payload length must be exactly 4 * product(dims) bytes. Writing any
numpy float32 array and reading it back is bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"SECO"
VERSION = 1


class TensorFormatError(ValueError):
    """Malformed tensor file; the message names the offending byte offset."""


def write_tensor(path, array) -> None:
    arr = np.ascontiguousarray(array, dtype="<f4")
    header = struct.pack("<4sII", MAGIC, VERSION, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    Path(path).write_bytes(header + arr.tobytes())


def read_tensor(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if len(blob) < 12:
        raise TensorFormatError(
            f"{path}: truncated header, need 12 bytes, got {len(blob)} (offset 0)"
        )
    magic, version, ndim = struct.unpack_from("<4sII", blob, 0)
    if magic != MAGIC:
        raise TensorFormatError(f"{path}: bad magic {magic!r} at offset 0")
    if version != VERSION:
        raise TensorFormatError(f"{path}: unsupported version {version} at offset 4")
    dims_end = 12 + 8 * ndim
    if len(blob) < dims_end:
        raise TensorFormatError(
            f"{path}: truncated dims, need {dims_end} bytes, got {len(blob)} (offset 12)"
        )
    dims = struct.unpack_from(f"<{ndim}Q", blob, 12)
    expected = 4 * int(np.prod(dims, dtype=object)) if ndim else 4
    payload = blob[dims_end:]
    if len(payload) != expected:
        raise TensorFormatError(
            f"{path}: payload length {len(payload)} != expected {expected} "
            f"(offset {dims_end})"
        )
    return np.frombuffer(payload, dtype="<f4").reshape(dims).copy()
