import struct

import numpy as np
import pytest

from expressive_vc.autodiff import decode_tensors, encode_tensors, load_tensors, save_tensors
from expressive_vc.common.errors import AudioFormatError, ParameterError


@pytest.fixture
def tensors():
    rng = np.random.default_rng(3)
    return {
        "encoder.conv0.weight": rng.standard_normal((4, 2, 3)).astype(np.float32),
        "encoder.conv0.bias": np.zeros(4, dtype=np.float32),
        "scalar": np.array(1.5, dtype=np.float32),
    }


def test_file_round_trip(tmp_path, tensors):
    path = tmp_path / "weights.tsr"
    save_tensors(path, tensors)
    loaded = load_tensors(path)
    assert list(loaded) == list(tensors)
    for name, value in tensors.items():
        assert loaded[name].dtype == np.float32
        assert loaded[name].shape == value.shape
        assert np.array_equal(loaded[name], value)


def test_header_layout():
    payload = encode_tensors({"w": np.array([1.0, 2.0], dtype=np.float32)})
    assert payload[:4] == b"TSR1"
    assert struct.unpack("<I", payload[4:8]) == (1,)
    assert payload[8:10] == b"\x01w"
    assert struct.unpack("<II", payload[10:18]) == (1, 2)
    assert np.frombuffer(payload[18:], dtype="<f4").tolist() == [1.0, 2.0]


def test_float64_is_stored_as_float32():
    decoded = decode_tensors(encode_tensors({"x": np.array([0.1])}))
    assert decoded["x"][0] == np.float32(0.1)


def test_bad_magic():
    with pytest.raises(AudioFormatError, match="not a TSR1"):
        decode_tensors(b"TSR2\x00\x00\x00\x00")


def test_truncated_payload(tensors):
    payload = encode_tensors(tensors)
    with pytest.raises(AudioFormatError, match="truncated"):
        decode_tensors(payload[:-3])


def test_trailing_bytes(tensors):
    with pytest.raises(AudioFormatError, match="trailing"):
        decode_tensors(encode_tensors(tensors) + b"\x00")


def test_duplicate_names():
    single = encode_tensors({"a": np.ones(1)})
    body = single[8:]
    payload = b"TSR1" + struct.pack("<I", 2) + body + body
    with pytest.raises(AudioFormatError, match="duplicate"):
        decode_tensors(payload)


@pytest.mark.parametrize("name", ["", "x" * 256])
def test_name_length_limits(name):
    with pytest.raises(ParameterError):
        encode_tensors({name: np.ones(1)})


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="absent.tsr"):
        load_tensors(tmp_path / "absent.tsr")


def test_rank_zero_keeps_its_shape():
    encoded = encode_tensors({"stride": np.array(5.0)})
    # Rank 0 writes no dimensions
    assert encoded[4 + 4 + 1 + 6:4 + 4 + 1 + 6 + 4] == struct.pack("<I", 0)
    assert decode_tensors(encoded)["stride"].shape == ()
