import math
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from expressive_vc.common.errors import DivergenceError, PreconditionError
from expressive_vc.domain.config import PipelineConfig
from expressive_vc.domain.features import BnfMatrix
from expressive_vc.domain.losses import LossBreakdown
from expressive_vc.domain.prosody import SpeakerEmbedding
from expressive_vc.training import SmokeTrainer, smoke_train, write_loss_history
from conftest import make_pulse_train


def test_single_step_is_finite(small_config, small_clip):
    history = smoke_train([small_clip], small_config, seed=0, steps=1)
    assert len(history) == 1
    assert history[0].is_finite()
    assert history[0].stft > 0


def test_fixed_seed_reproduces_history(small_config, small_clip):
    first = smoke_train([small_clip], small_config, seed=3, steps=2)
    second = smoke_train([small_clip], small_config, seed=3, steps=2)
    assert first == second


def test_prepare_alternates_speed(small_config, small_clip):
    trainer = SmokeTrainer(small_config, seed=1)
    original = trainer.prepare(small_clip, 0)
    augmented = trainer.prepare(small_clip, 1)
    assert original.speed_factor == 1.0
    assert 1.1 <= augmented.speed_factor <= 1.5
    frames = original.bnf.shape[0]
    assert original.bnf.shape == (frames, 6)
    assert original.target.shape == (frames * 80,)
    assert original.f0_norm.shape == original.energy.shape == (frames,)
    assert augmented.bnf.shape[0] < frames


def test_speed_augmentation_can_be_disabled(small_config, small_clip):
    config = small_config.model_copy(update={
        "training": small_config.training.model_copy(update={"speed_augment": False})
    })
    assert SmokeTrainer(config, seed=1).prepare(small_clip, 1).speed_factor == 1.0


def test_external_bnfs_are_aligned(small_config, small_clip):
    bnf = BnfMatrix(values=np.ones((7, 6)))
    example = SmokeTrainer(small_config, seed=1).prepare(small_clip, 0, bnf)
    assert np.array_equal(example.bnf, np.ones((30, 6)))


def test_loss_history_csv(tmp_path):
    row = LossBreakdown(adv_g=1.0, adv_d=0.5, fm=0.25, stft=2.0, total_g=3.25, total_d=0.5)
    path = tmp_path / "losses.csv"
    write_loss_history(path, [row, row])
    lines = path.read_text().splitlines()
    assert lines[0] == "step,adv_g,adv_d,fm,stft,total_g,total_d"
    assert lines[2] == "1,1,0.5,0.25,2,3.25,0.5"


def test_needs_clips(small_config):
    with pytest.raises(PreconditionError):
        smoke_train([], small_config, steps=1)


def test_rejects_short_clips(small_config):
    with pytest.raises(PreconditionError, match="0.100 s"):
        smoke_train([make_pulse_train(160.0, seconds=0.1, sample_rate=8000)], small_config, steps=1)


def test_bnf_count_must_match(small_config, small_clip):
    with pytest.raises(PreconditionError):
        smoke_train([small_clip], small_config, steps=1, bnfs=[None, None])


def test_speaker_dimension_must_match(small_config):
    with pytest.raises(PreconditionError):
        SmokeTrainer(small_config, seed=0, speaker=SpeakerEmbedding(values=np.ones(3)))


def test_divergence_reports_the_step(small_config, small_clip):
    terms = MagicMock()
    terms.breakdown = LossBreakdown(
        adv_g=math.nan, adv_d=0.0, fm=0.0, stft=0.0, total_g=math.nan, total_d=0.0
    )
    with patch("expressive_vc.training.trainer.compute_losses", return_value=terms):
        with pytest.raises(DivergenceError) as info:
            smoke_train([small_clip], small_config, seed=0, steps=1)
    assert info.value.step == 0


@pytest.mark.slow
def test_two_hundred_steps_reduce_the_stft_loss():
    clip = make_pulse_train(160.0, seconds=1.0)
    config = PipelineConfig()
    assert clip.sample_rate == config.audio.sample_rate
    history = smoke_train([clip], config, seed=0, steps=200)
    assert all(losses.is_finite() for losses in history)
    stft = [losses.stft for losses in history]
    peak = int(np.argmax(stft))
    assert min(stft[peak:]) <= 0.8 * stft[peak]
