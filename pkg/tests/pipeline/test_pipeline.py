import numpy as np
import pytest

from expressive_vc.audio import read_wav, write_wav
from expressive_vc.autodiff import save_tensors
from expressive_vc.common.errors import AudioFormatError, PreconditionError
from expressive_vc.domain.config import FusionConfig
from expressive_vc.domain.features import BnfMatrix
from expressive_vc.features.bnf import read_bnf, write_bnf
from expressive_vc.prosody import read_prosody_csv
from expressive_vc.services.pipeline import VoiceConversionPipeline
from conftest import make_pulse_train


@pytest.fixture
def pipeline(small_config):
    return VoiceConversionPipeline(small_config)


@pytest.fixture
def clip_path(tmp_path, small_clip):
    path = tmp_path / "clip.wav"
    write_wav(path, small_clip)
    return path


@pytest.fixture
def assets(tmp_path, pipeline):
    """Seeded weights, speaker embedding and 30 frames of 6-dim BNFs"""
    weights = tmp_path / "model.tsr"
    speaker = tmp_path / "speaker.tsr"
    bnf = tmp_path / "clip.bnf"
    pipeline.init_weights(weights, seed=1)
    pipeline.init_speaker(speaker, seed=2)
    write_bnf(bnf, BnfMatrix(values=np.random.default_rng(3).standard_normal((30, 6))))
    return bnf, speaker, weights


def test_load_audio_resamples(tmp_path, pipeline):
    path = tmp_path / "wide.wav"
    write_wav(path, make_pulse_train(160.0, seconds=0.3, sample_rate=16000))
    audio = pipeline.load_audio(path)
    assert audio.sample_rate == 8000
    assert len(audio) == 2400


def test_perturb_file_is_deterministic(tmp_path, pipeline, clip_path):
    first = pipeline.perturb_file(clip_path, tmp_path / "a.wav", seed=7)
    second = pipeline.perturb_file(clip_path, tmp_path / "b.wav", seed=7)
    assert first == second
    assert np.array_equal(read_wav(tmp_path / "a.wav").samples, read_wav(tmp_path / "b.wav").samples)
    assert len(read_wav(tmp_path / "a.wav")) == 2400


def test_neutral_perturbation_copies_audio(tmp_path, pipeline, clip_path):
    config = pipeline.perturb_file(clip_path, tmp_path / "same.wav", seed=5, neutral=True)
    assert config.seed == 5
    assert config.formant_ratio == 1.0
    assert np.array_equal(read_wav(tmp_path / "same.wav").samples, read_wav(clip_path).samples)


def test_features_file(tmp_path, pipeline, clip_path):
    track = pipeline.features_file(clip_path, tmp_path / "clip.csv")
    assert len(track) == 30
    loaded = read_prosody_csv(tmp_path / "clip.csv")
    assert np.allclose(loaded.f0, track.f0, atol=1e-6)
    assert np.median(track.f0[track.voiced]) == pytest.approx(160.0, rel=0.05)


def test_fuse_files(tmp_path, pipeline, clip_path, assets):
    bnf, speaker, weights = assets
    output = pipeline.fuse_files(
        bnf, clip_path, speaker, weights, seed=0,
        emit_weights=tmp_path / "w.csv", emit_hf=tmp_path / "hf.bnf", emit_wav=tmp_path / "out.wav",
    )
    assert output.h_f.shape == (30, 8)
    assert np.allclose(output.weights.sum(axis=1), 1.0)
    assert (tmp_path / "w.csv").read_text().splitlines()[0] == "frame,w_b"
    assert len((tmp_path / "w.csv").read_text().splitlines()) == 31
    assert np.allclose(read_bnf(tmp_path / "hf.bnf").values, output.h_f, atol=1e-6)
    assert len(read_wav(tmp_path / "out.wav")) == 2400


def test_fuse_is_deterministic(pipeline, clip_path, assets):
    bnf, speaker, weights = assets
    first = pipeline.fuse_files(bnf, clip_path, speaker, weights, seed=4)
    second = pipeline.fuse_files(bnf, clip_path, speaker, weights, seed=4)
    assert np.array_equal(first.h_f, second.h_f)


def test_concat_fusion_has_no_weights(small_config, clip_path, assets):
    pipeline = VoiceConversionPipeline(
        small_config.model_copy(update={"fusion": FusionConfig(mode="concat")})
    )
    bnf, speaker, weights = assets
    output = pipeline.fuse_files(bnf, clip_path, speaker, weights, seed=0, neutral=True)
    assert output.h_f.shape == (30, 8)
    assert np.all(np.isnan(output.weights))


def test_speaker_dimension_must_match(tmp_path, pipeline, clip_path, assets):
    bnf, _, weights = assets
    wide = tmp_path / "wide.tsr"
    pipeline.init_speaker(wide, seed=2, dim=7)
    with pytest.raises(PreconditionError, match="7 dims"):
        pipeline.fuse_files(bnf, clip_path, wide, weights, seed=0)


def test_speaker_file_without_embedding(tmp_path, pipeline):
    path = tmp_path / "other.tsr"
    save_tensors(path, {"something_else": np.ones(4)})
    with pytest.raises(AudioFormatError, match="speaker_embedding"):
        pipeline.load_speaker(path)


def test_correlate_identical_files(pipeline, clip_path):
    report = pipeline.correlate_files(clip_path, clip_path)
    assert report.lf0_r == pytest.approx(1.0, abs=1e-12)
    assert report.energy_r == pytest.approx(1.0, abs=1e-12)
    assert report.n_frames_used == 30


def test_smoketrain_files(tmp_path, pipeline, clip_path, assets):
    bnf, _, weights = assets
    history = pipeline.smoketrain_files(
        [clip_path], tmp_path / "loss.csv", seed=0, steps=2,
        bnf_paths=[bnf], weights_path=weights, save_weights=tmp_path / "trained.tsr",
    )
    assert len(history) == 2
    lines = (tmp_path / "loss.csv").read_text().splitlines()
    assert lines[0] == "step,adv_g,adv_d,fm,stft,total_g,total_d"
    assert len(lines) == 3
    assert pipeline.load_model(tmp_path / "trained.tsr").speaker_dim == 4
