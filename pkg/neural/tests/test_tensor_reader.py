"""Reader tests against the documented binary container layout."""

import json
import struct

import numpy as np
import pytest

from radcnn import TensorFormatError, read_channel_tensor
from radcnn.tensorio import DIM_ORDER, MAGIC, VERSION


def write_container(path, tensor, header_extra=None, magic=MAGIC, version=VERSION,
                    dim_order=DIM_ORDER, payload_trim=0, trailing=b""):
    header = {
        "dims": list(tensor.shape),
        "dim_order": list(dim_order),
        "dtype": "c64-interleaved",
    }
    if header_extra:
        header.update(header_extra)
    blob = json.dumps(header).encode()
    pairs = np.empty(tensor.shape + (2,), dtype="<f4")
    pairs[..., 0] = tensor.real
    pairs[..., 1] = tensor.imag
    payload = pairs.tobytes()
    if payload_trim:
        payload = payload[:-payload_trim]
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(struct.pack("<I", version))
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(payload)
        fh.write(trailing)


@pytest.fixture
def sample_tensor():
    rng = np.random.default_rng(0)
    t = rng.standard_normal((3, 2, 1, 2, 2, 4)) + 1j * rng.standard_normal((3, 2, 1, 2, 2, 4))
    # float32 quantized so the round trip is exact
    return t.astype(np.complex64).astype(np.complex128)


def test_round_trip_preserves_values_and_header(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, header_extra={"seed": 7})
    loaded, header = read_channel_tensor(path)
    assert loaded.shape == sample_tensor.shape
    assert loaded.dtype == np.complex128
    np.testing.assert_array_equal(loaded, sample_tensor)
    assert header["seed"] == 7
    assert tuple(header["dim_order"]) == DIM_ORDER


def test_reads_simulator_export(small_paths):
    tensor, header = read_channel_tensor(small_paths[0])
    assert tensor.shape[0] == 240
    assert tuple(header["dims"]) == tensor.shape
    assert np.isfinite(tensor.view(np.float64)).all()


def test_bad_magic_rejected(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, magic=b"NOPE")
    with pytest.raises(TensorFormatError, match="magic"):
        read_channel_tensor(path)


def test_unsupported_version_rejected(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, version=9)
    with pytest.raises(TensorFormatError, match="version"):
        read_channel_tensor(path)


def test_wrong_dim_order_rejected(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, dim_order=("user",) + DIM_ORDER[1:])
    with pytest.raises(TensorFormatError, match="dim_order"):
        read_channel_tensor(path)


def test_truncated_payload_rejected(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, payload_trim=8)
    with pytest.raises(TensorFormatError, match="truncated"):
        read_channel_tensor(path)


def test_trailing_bytes_rejected(tmp_path, sample_tensor):
    path = tmp_path / "t.ract"
    write_container(path, sample_tensor, trailing=b"x")
    with pytest.raises(TensorFormatError, match="trailing"):
        read_channel_tensor(path)
