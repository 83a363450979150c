import numpy as np
from scipy import signal

from expressive_vc.common.errors import PreconditionError
from expressive_vc.domain.audio import AudioBuffer, FrameConfig


def frame_window(frame_config: FrameConfig, sample_rate: int) -> np.ndarray:
    """Named analysis window of one frame length"""
    return signal.get_window(
        frame_config.window, frame_config.frame_length(sample_rate), fftbins=True
    )


def frame_samples(samples: np.ndarray, frame_length: int, hop: int) -> np.ndarray:
    """
    Slice a signal into centered frames on the shared grid

    The signal is reflect-padded by frame_length // 2 on both ends, so frame t
    is centered on sample t * hop and there are ceil(len / hop) frames.

    Returns:
        (T, frame_length) array of frames
    """
    if samples.shape[0] == 0:
        raise PreconditionError("cannot frame an empty signal")
    if hop <= 0 or frame_length <= 0:
        raise PreconditionError(f"invalid framing: frame length {frame_length}, hop {hop}")
    count = -(-samples.shape[0] // hop)
    half = frame_length // 2
    # Reflection needs two samples; a single sample is repeated instead
    mode = "reflect" if samples.shape[0] > 1 else "edge"
    padded = np.pad(samples, (half, half), mode=mode)
    needed = (count - 1) * hop + frame_length
    if padded.shape[0] < needed:
        padded = np.pad(padded, (0, needed - padded.shape[0]))
    index = np.arange(count)[:, None] * hop + np.arange(frame_length)[None, :]
    return padded[index]


def frame_signal(audio: AudioBuffer, frame_config: FrameConfig) -> np.ndarray:
    """Windowed frames (T, frame_len) with T = ceil(len / hop)"""
    frame_length = frame_config.frame_length(audio.sample_rate)
    hop = frame_config.hop_length(audio.sample_rate)
    frames = frame_samples(audio.samples, frame_length, hop)
    return frames * frame_window(frame_config, audio.sample_rate)
