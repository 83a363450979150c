from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from expressive_vc.config import (
    default_config,
    load_config,
    parse_config,
    save_config,
    serialize_config,
)
from expressive_vc.domain.config import (
    AudioConfig,
    EncoderConfig,
    PerturbationRanges,
    PipelineConfig,
    RuntimeConfig,
    TrainingConfig,
    WeightPaths,
)
from expressive_vc.domain.losses import DiscriminatorSet


def test_defaults():
    config = default_config()
    assert config.audio.sample_rate == 24000
    assert config.audio.hop_samples == 240
    assert config.encoders.pwav_strides == (6, 5, 4, 2)
    assert config.encoders.decoder_hop == 240
    assert config.discriminators.periods == [2, 3, 5, 7, 11]
    assert config.runtime.seed is None


def test_round_trip_of_defaults():
    config = PipelineConfig()
    assert parse_config(serialize_config(config)) == config


def test_round_trip_through_file(tmp_path, small_config):
    path = tmp_path / "evc.ini"
    config = small_config.model_copy(update={
        "runtime": RuntimeConfig(seed=42, log_level="WARNING"),
        "weights": WeightPaths(model=Path("/tmp/model.tsr")),
    })
    save_config(config, path)
    loaded = load_config(path)
    assert loaded == config
    assert loaded.weights.model == Path("/tmp/model.tsr")
    assert loaded.weights.speaker is None
    assert loaded.discriminators.stft_resolutions == [(64, 16, 64)]


def test_serialized_layout():
    text = serialize_config(PipelineConfig())
    assert "[audio]\nsample_rate = 24000\n" in text
    assert "stft_resolutions = 512:128:512, 1024:256:1024, 2048:512:2048" in text
    assert "loss_weights.adv = 1.0" in text
    # Unset optionals are written as empty values
    assert "[runtime]\nseed =\n" in text


def test_partial_file_keeps_defaults():
    config = parse_config("[runtime]\nseed = 7\n\n[training]\nsteps = 3\n")
    assert config.runtime.seed == 7
    assert config.training.steps == 3
    assert config.training.learning_rate == TrainingConfig().learning_rate
    assert config.audio == AudioConfig()


def test_unknown_key_is_rejected():
    with pytest.raises(ValueError, match="Unknown key 'colour'"):
        parse_config("[audio]\ncolour = blue\n")


def test_unknown_section_is_rejected():
    with pytest.raises(ValueError):
        parse_config("[daemon]\nname = x\n")


def test_malformed_text():
    with pytest.raises(ValueError, match="Malformed"):
        parse_config("sample_rate = 24000\n")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="missing.ini"):
        load_config(tmp_path / "missing.ini")


def test_hop_longer_than_frame_is_invalid():
    with pytest.raises(ValidationError):
        parse_config("[audio]\nframe_len_ms = 5\nhop_ms = 10\n")


def test_decoder_strides_must_match_hop():
    with pytest.raises(ValidationError, match="decoder strides"):
        PipelineConfig(encoders=EncoderConfig(decoder_strides=(2, 5, 5, 6), decoder_channels=(8, 8, 8)))


def test_channel_counts_follow_strides():
    with pytest.raises(ValidationError, match="hidden channel counts"):
        PipelineConfig(encoders=EncoderConfig(pwav_channels=(64, 128)))


def test_paper_strides_are_selectable():
    # 6*5*5*2 = 300 samples is a 10 ms hop at 30 kHz
    config = PipelineConfig(
        audio=AudioConfig(sample_rate=30000),
        encoders=EncoderConfig(pwav_strides=(6, 5, 5, 2), decoder_strides=(2, 5, 5, 6)),
    )
    assert config.encoders.pwav_hop == config.audio.hop_samples == 300


def test_periods_must_be_distinct_primes():
    with pytest.raises(ValidationError):
        DiscriminatorSet(periods=[2, 4])
    with pytest.raises(ValidationError):
        DiscriminatorSet(periods=[3, 3])


def test_invalid_resolution():
    with pytest.raises(ValidationError):
        DiscriminatorSet(stft_resolutions=[(512, 1024, 512)])


def test_reversed_range_is_invalid():
    with pytest.raises(ValidationError):
        PerturbationRanges(formant_ratio=(1.4, 1.0))


def test_missing_weight_paths(tmp_path):
    present = tmp_path / "model.tsr"
    present.write_bytes(b"")
    paths = WeightPaths(model=present, speaker=tmp_path / "speaker.tsr")
    assert paths.missing() == [tmp_path / "speaker.tsr"]


@settings(max_examples=30, deadline=None)
@given(
    seed=st.one_of(st.none(), st.integers(min_value=0, max_value=(1 << 64) - 1)),
    steps=st.integers(min_value=1, max_value=10_000),
    learning_rate=st.floats(min_value=1e-8, max_value=1.0, allow_nan=False),
    formant=st.tuples(
        st.floats(min_value=0.5, max_value=1.0), st.floats(min_value=1.0, max_value=2.0)
    ),
    mode=st.sampled_from(["attention", "concat"]),
    components=st.dictionaries(
        st.sampled_from(["audio", "training", "perturbation.chain"]),
        st.sampled_from(["DEBUG", "INFO", "WARNING"]),
        max_size=3,
    ),
)
def test_round_trip_property(seed, steps, learning_rate, formant, mode, components):
    config = PipelineConfig.model_validate({
        "runtime": {"seed": seed, "logging": {"components": components}},
        "training": {"steps": steps, "learning_rate": learning_rate},
        "perturbation": {"formant_ratio": formant},
        "fusion": {"mode": mode},
    })
    assert parse_config(serialize_config(config)) == config
