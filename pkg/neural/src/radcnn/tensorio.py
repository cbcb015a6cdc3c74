"""Reader for the binary channel tensor container produced by the simulator CLI.

Layout: 4-byte magic b"RACT", uint32 little-endian version, uint64
little-endian header length, UTF-8 JSON header, then the payload as
little-endian float32 (real, imag) pairs in C order.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"RACT"
VERSION = 1

DIM_ORDER = ("sample", "user", "subcarrier", "mode", "rx", "tx")


class TensorFormatError(ValueError):
    """Raised when a tensor file does not match the documented container layout."""


def read_channel_tensor(path) -> tuple[np.ndarray, dict]:
    """Load a channel tensor file, returning (complex128 array, header dict)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise TensorFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != VERSION:
            raise TensorFormatError(f"unsupported container version {version}")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        dims = header.get("dims")
        order = tuple(header.get("dim_order", ()))
        if order != DIM_ORDER:
            raise TensorFormatError(f"unexpected dim_order {order}")
        if not isinstance(dims, list) or len(dims) != len(DIM_ORDER):
            raise TensorFormatError(f"dims must list {len(DIM_ORDER)} extents, got {dims}")
        shape = tuple(int(d) for d in dims)
        count = 2 * int(np.prod(shape))
        raw = np.fromfile(fh, dtype="<f4", count=count)
        if raw.size != count:
            raise TensorFormatError(
                f"payload truncated: expected {count} float32 values, read {raw.size}"
            )
        if fh.read(1):
            raise TensorFormatError("trailing bytes after payload")
    pairs = raw.astype(np.float64).reshape(shape + (2,))
    tensor = pairs[..., 0] + 1j * pairs[..., 1]
    return tensor, header
