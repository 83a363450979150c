import numpy as np

from expressive_vc.audio.framing import frame_samples
from expressive_vc.domain.audio import AudioBuffer, FrameConfig


def extract_energy(audio: AudioBuffer, frame_config: FrameConfig) -> np.ndarray:
    """Per-frame RMS of the unwindowed frames"""
    frames = frame_samples(
        audio.samples,
        frame_config.frame_length(audio.sample_rate),
        frame_config.hop_length(audio.sample_rate),
    )
    return np.sqrt(np.mean(np.square(frames), axis=1))
