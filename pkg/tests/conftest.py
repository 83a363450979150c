import numpy as np
import pytest
from scipy import signal

from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.domain.config import (
    AudioConfig,
    EncoderConfig,
    PipelineConfig,
    TrainingConfig,
)
from expressive_vc.domain.losses import DiscriminatorSet

SAMPLE_RATE = 24000


def make_sine(frequency: float, seconds: float = 1.0, sample_rate: int = SAMPLE_RATE,
              amplitude: float = 0.5) -> AudioBuffer:
    t = np.arange(int(round(seconds * sample_rate))) / sample_rate
    return AudioBuffer(samples=amplitude * np.sin(2 * np.pi * frequency * t), sample_rate=sample_rate)


def make_pulse_train(f0: float, seconds: float = 1.0, sample_rate: int = SAMPLE_RATE,
                     amplitude: float = 0.5) -> AudioBuffer:
    """Glottal-like pulses through a two-pole resonance, so every period has one clear peak"""
    length = int(round(seconds * sample_rate))
    excitation = np.zeros(length)
    period = sample_rate / f0
    excitation[np.round(np.arange(0, length, period)).astype(int) % length] = 1.0
    radius = np.exp(-np.pi * 150.0 / sample_rate)
    theta = 2 * np.pi * 700.0 / sample_rate
    shaped = signal.lfilter([1.0], [1.0, -2 * radius * np.cos(theta), radius ** 2], excitation)
    return AudioBuffer(samples=amplitude * shaped / np.max(np.abs(shaped)), sample_rate=sample_rate)


def make_vowel(f0: float, formant_hz: float, seconds: float = 1.0,
               sample_rate: int = SAMPLE_RATE) -> AudioBuffer:
    """Harmonic source with a single resonance at ``formant_hz``"""
    length = int(round(seconds * sample_rate))
    t = np.arange(length) / sample_rate
    source = sum(np.sin(2 * np.pi * k * f0 * t) for k in range(1, int(0.45 * sample_rate / f0)))
    radius = np.exp(-np.pi * 80.0 / sample_rate)
    theta = 2 * np.pi * formant_hz / sample_rate
    shaped = signal.lfilter([1.0], [1.0, -2 * radius * np.cos(theta), radius ** 2], source)
    return AudioBuffer(samples=0.5 * shaped / np.max(np.abs(shaped)), sample_rate=sample_rate)


@pytest.fixture
def sine_220():
    return make_sine(220.0)


@pytest.fixture
def pulse_train_220():
    return make_pulse_train(220.0)


@pytest.fixture
def white_noise():
    rng = np.random.default_rng(1234)
    return AudioBuffer(samples=0.1 * rng.standard_normal(SAMPLE_RATE), sample_rate=SAMPLE_RATE)


@pytest.fixture
def silence():
    return AudioBuffer(samples=np.zeros(SAMPLE_RATE), sample_rate=SAMPLE_RATE)


@pytest.fixture
def small_config():
    """8 kHz pipeline with narrow encoders so training steps stay cheap"""
    return PipelineConfig(
        audio=AudioConfig(sample_rate=8000),
        encoders=EncoderConfig(
            bnf_dim=6,
            feature_dim=8,
            speaker_dim=4,
            bnf_kernel_size=3,
            pwav_strides=(4, 4, 5),
            pwav_channels=(4, 8),
            decoder_strides=(2, 5, 8),
            decoder_channels=(8, 4),
        ),
        discriminators=DiscriminatorSet(periods=[2, 3], scales=[1, 2], stft_resolutions=[(64, 16, 64)]),
        training=TrainingConfig(steps=2, learning_rate=1e-3, min_clip_seconds=0.2),
    )


@pytest.fixture
def small_clip():
    return make_pulse_train(160.0, seconds=0.3, sample_rate=8000)
