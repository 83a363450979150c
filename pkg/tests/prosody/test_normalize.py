import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from expressive_vc.common.errors import ShapeError, UnnormalizableError
from expressive_vc.domain.prosody import CLNParams, SpeakerEmbedding
from expressive_vc.prosody import cln, znorm_f0

voiced_tracks = arrays(
    np.float64, st.integers(min_value=2, max_value=60),
    elements=st.one_of(st.just(0.0), st.floats(min_value=50.0, max_value=600.0)),
).filter(lambda f0: np.count_nonzero(f0) >= 2 and np.std(f0[f0 > 0]) > 1.0)


def test_three_point_example():
    out = znorm_f0(np.array([100.0, 200.0, 300.0]))
    assert np.allclose(out, [-1.2247449, 0.0, 1.2247449], atol=1e-6)


def test_unvoiced_frames_stay_zero():
    assert np.allclose(znorm_f0(np.array([0.0, 100.0, 0.0, 300.0])), [0.0, -1.0, 0.0, 1.0])


def test_constant_track_normalizes_to_zero():
    assert np.array_equal(znorm_f0(np.array([0.0, 180.0, 180.0])), np.zeros(3))


def test_no_voiced_frame():
    with pytest.raises(UnnormalizableError):
        znorm_f0(np.zeros(10))


@given(f0=voiced_tracks)
def test_voiced_statistics(f0):
    out = znorm_f0(f0)[f0 > 0]
    assert abs(out.mean()) < 1e-6
    assert abs(out.var() - 1.0) < 1e-6


@given(f0=voiced_tracks, scale=st.floats(min_value=0.1, max_value=10.0))
def test_invariant_to_register(f0, scale):
    assert np.allclose(znorm_f0(f0 * scale), znorm_f0(f0), atol=1e-6)


@pytest.fixture
def rng():
    return np.random.default_rng(4)


def test_zero_conditioning_is_layer_norm(rng):
    x = rng.standard_normal((20, 8)) * 3.0 + 1.0
    out = cln(x, SpeakerEmbedding(values=rng.standard_normal(5)), CLNParams.zeros(8, 5))
    assert np.allclose(out.mean(axis=1), 0.0, atol=1e-9)
    assert np.allclose(out.var(axis=1), 1.0, atol=1e-5)


def test_zero_speaker_is_layer_norm(rng):
    x = rng.standard_normal((6, 4))
    params = CLNParams(w_gamma=rng.standard_normal((4, 3)), w_beta=rng.standard_normal((4, 3)))
    plain = cln(x, SpeakerEmbedding(values=np.ones(3)), CLNParams.zeros(4, 3))
    assert np.allclose(cln(x, SpeakerEmbedding(values=np.zeros(3)), params), plain, atol=1e-12)


def test_matches_elementwise_oracle(rng):
    x = rng.standard_normal((7, 4))
    spk = rng.standard_normal(3)
    params = CLNParams(w_gamma=rng.standard_normal((4, 3)), w_beta=rng.standard_normal((4, 3)))
    out = cln(x, SpeakerEmbedding(values=spk), params)
    gamma = params.w_gamma @ spk + 1.0
    beta = params.w_beta @ spk
    for t in range(7):
        mean = sum(x[t]) / 4
        var = sum((v - mean) ** 2 for v in x[t]) / 4
        for c in range(4):
            expected = gamma[c] * (x[t, c] - mean) / np.sqrt(var + 1e-5) + beta[c]
            assert out[t, c] == pytest.approx(expected, abs=1e-6)


def test_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        cln(rng.standard_normal((5, 4)), SpeakerEmbedding(values=np.zeros(3)), CLNParams.zeros(6, 3))
    with pytest.raises(ShapeError):
        cln(rng.standard_normal((5, 4)), SpeakerEmbedding(values=np.zeros(2)), CLNParams.zeros(4, 3))
    with pytest.raises(ShapeError):
        cln(rng.standard_normal(4), SpeakerEmbedding(values=np.zeros(3)), CLNParams.zeros(4, 3))
