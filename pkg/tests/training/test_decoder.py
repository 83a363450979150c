import numpy as np
import pytest

from expressive_vc.autodiff import Tensor, load_tensors, save_tensors
from expressive_vc.common.errors import AudioFormatError, ShapeError
from expressive_vc.common.seeding import make_rng
from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.training import ToyDecoder, toy_decode


@pytest.fixture
def decoder():
    return ToyDecoder.init(make_rng(0, "decoder"), 4, (2, 5, 8), (4, 4))


def test_output_length_is_hop_times_frames(decoder):
    assert decoder.hop == 80
    rng = np.random.default_rng(0)
    for frames in range(1, 201):
        h, h_p = rng.standard_normal((frames, 4)), rng.standard_normal((frames, 4))
        assert len(toy_decode(h, h_p, decoder)) == frames * 80


def test_default_strides_give_a_second():
    decoder = ToyDecoder.init(make_rng(0, "decoder"), 8, (2, 4, 5, 6), (8, 8, 8))
    out = toy_decode(np.zeros((100, 8)), np.zeros((100, 8)), decoder).samples
    assert out.shape == (24000,)
    assert np.all(np.abs(out) < 1.0)


def test_zero_weights_give_silence():
    zeros = lambda *shape: Tensor(np.zeros(shape))
    decoder = ToyDecoder(
        zeros(3, 3), zeros(3), [zeros(2, 3, 4), zeros(1, 2, 6)], [zeros(2), zeros(1)], [2, 3]
    )
    rng = np.random.default_rng(1)
    out = toy_decode(rng.standard_normal((5, 3)), rng.standard_normal((5, 3)), decoder).samples
    assert np.array_equal(out, np.zeros(30))


def test_seeded_decoders_agree(decoder):
    other = ToyDecoder.init(make_rng(0, "decoder"), 4, (2, 5, 8), (4, 4))
    h = np.random.default_rng(2).standard_normal((12, 4))
    assert np.array_equal(toy_decode(h, h, decoder).samples, toy_decode(h, h, other).samples)


def test_trim_to_length(decoder):
    h = np.ones((3, 4))
    assert len(toy_decode(h, h, decoder, length=200)) == 200


def test_state_round_trip(decoder):
    rebuilt = ToyDecoder.from_state(decoder.state("dec"), "dec")
    assert rebuilt.strides == [2, 5, 8]
    h = np.random.default_rng(3).standard_normal((6, 4))
    assert np.array_equal(toy_decode(h, h, rebuilt).samples, toy_decode(h, h, decoder).samples)


def test_incomplete_state(decoder):
    state = decoder.state()
    del state["decoder.prosody_bias"]
    with pytest.raises(AudioFormatError):
        ToyDecoder.from_state(state)
    with pytest.raises(AudioFormatError, match="no layers"):
        ToyDecoder.from_state({"decoder.prosody_projection": np.eye(2), "decoder.prosody_bias": np.zeros(2)})


def test_shape_errors(decoder):
    with pytest.raises(ShapeError):
        toy_decode(np.ones((3, 4)), np.ones((4, 4)), decoder)
    with pytest.raises(ShapeError):
        ToyDecoder.init(make_rng(0, "decoder"), 4, (2, 5, 8), (4,))


def test_state_survives_a_weights_file(tmp_path, decoder):
    path = tmp_path / "decoder.tsr"
    save_tensors(path, decoder.state())
    loaded = load_tensors(path)
    assert loaded["decoder.0.stride"].shape == ()
    assert loaded["decoder.1.stride"].shape == ()
    assert ToyDecoder.from_state(loaded).strides == [2, 5, 8]


def test_decoded_audio_carries_the_sample_rate(decoder):
    h = np.ones((3, 4))
    out = toy_decode(h, h, decoder, sample_rate=8000)
    assert isinstance(out, AudioBuffer)
    assert out.sample_rate == 8000
    assert toy_decode(h, h, decoder).sample_rate == 24000
