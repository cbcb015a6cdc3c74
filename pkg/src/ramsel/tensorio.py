"""Binary container for exported channel tensors.

Layout: 4 magic bytes ``RACT``, version (uint32 LE), header length
(uint64 LE), a UTF-8 JSON header, then the payload as little-endian float32
pairs (re, im) in row-major order of the dims declared in the header.
"""

import json
import struct

import numpy as np

MAGIC = b"RACT"
VERSION = 1
DIM_ORDER = ("sample", "user", "subcarrier", "mode", "rx", "tx")


def quantize_c64(tensor: np.ndarray) -> np.ndarray:
    """Round-trip a complex tensor through the file's float32 precision."""
    t = np.asarray(tensor)
    return t.real.astype(np.float32).astype(np.float64) + 1j * t.imag.astype(np.float32).astype(
        np.float64
    )


def write_channel_tensor(path, tensor: np.ndarray, seed: int, geometry_meta: dict) -> None:
    """Write a (S, K, N_f, N_P, N_R, N_T) complex tensor to ``path``."""
    t = np.asarray(tensor)
    if t.ndim != 6:
        raise ValueError(f"expected 6 tensor axes, got {t.ndim}")
    header = {
        "dims": [int(d) for d in t.shape],
        "dim_order": list(DIM_ORDER),
        "dtype": "c64-interleaved",
        "seed": int(seed),
        "geometry": geometry_meta,
    }
    hjson = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = np.empty(t.shape + (2,), dtype="<f4")
    payload[..., 0] = t.real
    payload[..., 1] = t.imag
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<Q", len(hjson)))
        fh.write(hjson)
        fh.write(payload.tobytes())


def read_channel_tensor(path) -> tuple[np.ndarray, dict]:
    """Read a tensor file; returns (complex128 tensor, header dict).

    The returned values carry exactly the file's float32 precision.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ValueError(f"{path}: bad magic bytes {blob[:4]!r}")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    (hlen,) = struct.unpack_from("<Q", blob, 8)
    header = json.loads(blob[16 : 16 + hlen].decode("utf-8"))
    dims = tuple(int(d) for d in header["dims"])
    if header.get("dtype") != "c64-interleaved":
        raise ValueError(f"{path}: unsupported dtype {header.get('dtype')!r}")
    count = int(np.prod(dims)) * 2
    raw = np.frombuffer(blob, dtype="<f4", offset=16 + hlen)
    if raw.size != count:
        raise ValueError(f"{path}: payload holds {raw.size} floats, expected {count}")
    pairs = raw.reshape(dims + (2,)).astype(np.float64)
    return pairs[..., 0] + 1j * pairs[..., 1], header
