import numpy as np

from expressive_vc.audio.framing import frame_signal
from expressive_vc.domain.audio import AudioBuffer, FrameConfig
from expressive_vc.domain.features import BnfMatrix

LOG_FLOOR = 1e-5


def spectral_bnf(audio: AudioBuffer, dim: int, frame_config: FrameConfig = FrameConfig()) -> BnfMatrix:
    """
    Stand-in BNFs for smoke runs without an ASR model

    Frame log-magnitude spectra pooled into ``dim`` contiguous bin groups on
    the shared frame grid. Carries no linguistic abstraction.
    """
    frames = frame_signal(audio, frame_config)
    magnitude = np.abs(np.fft.rfft(frames, axis=1))
    groups = np.array_split(np.arange(magnitude.shape[1]), dim)
    pooled = np.stack(
        [magnitude[:, g].mean(axis=1) if g.size else np.zeros(magnitude.shape[0]) for g in groups],
        axis=1,
    )
    return BnfMatrix(
        values=np.log(pooled + LOG_FLOOR).astype(np.float32),
        source_hop_ms=int(round(frame_config.hop_ms)),
    )
