"""Independent oracle and host bindings for the seco compressor."""

from .bindings import CompressorError, bind_compress
from .oracle import OracleResult, oracle_compress
from .tensorfile import TensorFormatError, read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "CompressorError",
    "OracleResult",
    "TensorFormatError",
    "bind_compress",
    "oracle_compress",
    "read_tensor",
    "write_tensor",
    "__version__",
]
