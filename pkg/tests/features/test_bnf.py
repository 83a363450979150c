import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from expressive_vc.common.errors import AudioFormatError, PreconditionError
from expressive_vc.domain.features import BnfMatrix
from expressive_vc.features import align_bnf, decode_bnf, encode_bnf, read_bnf, write_bnf


def test_binary_round_trip_is_bit_exact(tmp_path):
    values = np.random.default_rng(2).standard_normal((100, 256)).astype(np.float32)
    path = tmp_path / "utt.bnf"
    write_bnf(path, BnfMatrix(values=values, source_hop_ms=20))
    loaded = read_bnf(path)
    assert loaded.source_hop_ms == 20
    assert loaded.values.dtype == np.float32
    assert np.array_equal(loaded.values, values)


def test_header_payload_mismatch():
    payload = encode_bnf(BnfMatrix(values=np.ones((3, 4))))
    with pytest.raises(AudioFormatError, match="3x4"):
        decode_bnf(payload[:-4])


def test_bad_magic():
    with pytest.raises(AudioFormatError, match="not a BNF1"):
        decode_bnf(b"BNF2" + bytes(12))
    with pytest.raises(AudioFormatError, match="truncated"):
        decode_bnf(b"BNF1")


def test_csv_matches_binary(tmp_path):
    values = np.array([[0.5, -1.0, 2.25, 0.0],
                       [1.0, 1.5, -0.125, 3.0],
                       [-2.0, 0.75, 0.25, 1.0]], dtype=np.float32)
    csv_path = tmp_path / "utt.csv"
    csv_path.write_text("\n".join(",".join(str(v) for v in row) for row in values) + "\n")
    binary_path = tmp_path / "utt.bnf"
    write_bnf(binary_path, BnfMatrix(values=values))
    assert np.array_equal(read_bnf(csv_path).values, read_bnf(binary_path).values)


def test_malformed_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(AudioFormatError):
        read_bnf(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_bnf(tmp_path / "missing.bnf")


def test_align_identity():
    values = np.arange(12.0).reshape(4, 3)
    assert np.array_equal(align_bnf(values, 4), values)


def test_align_constant_rows():
    values = np.tile([1.0, -2.0], (7, 1))
    assert np.allclose(align_bnf(values, 19), np.tile([1.0, -2.0], (19, 1)))


def test_align_midpoint():
    values = np.array([[0.0, 2.0], [4.0, 6.0]])
    assert np.allclose(align_bnf(values, 3), [[0.0, 2.0], [2.0, 4.0], [4.0, 6.0]])


def test_align_endpoints_and_degenerate_sizes():
    values = np.random.default_rng(1).standard_normal((10, 2))
    out = align_bnf(values, 23)
    assert np.array_equal(out[0], values[0])
    assert np.allclose(out[-1], values[-1])
    assert np.array_equal(align_bnf(values[:1], 5), np.repeat(values[:1], 5, axis=0))
    with pytest.raises(PreconditionError):
        align_bnf(values, 0)


@given(
    values=arrays(np.float64, st.tuples(st.integers(2, 20), st.integers(1, 4)),
                  elements=st.floats(-100, 100)),
    target=st.integers(1, 60),
)
def test_align_stays_within_neighbours(values, target):
    out = align_bnf(values, target)
    assert out.shape == (target, values.shape[1])
    assert np.all(out >= values.min(axis=0) - 1e-9)
    assert np.all(out <= values.max(axis=0) + 1e-9)
