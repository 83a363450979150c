"""Formant shifting by resampling followed by WSOLA time stretching."""
import numpy as np
from scipy import signal

from expressive_vc.audio.resample import rate_ratio, resample_by_ratio
from expressive_vc.common.errors import PreconditionError
from expressive_vc.domain.audio import AudioBuffer

FORMANT_RATIO_RANGE = (0.5, 2.0)
WSOLA_FRAME_MS = 30.0
WSOLA_TOLERANCE_MS = 15.0


def wsola(
    samples: np.ndarray,
    target_length: int,
    sample_rate: int,
    frame_ms: float = WSOLA_FRAME_MS,
    tolerance_ms: float = WSOLA_TOLERANCE_MS,
) -> np.ndarray:
    """
    Stretch a signal to ``target_length`` samples without changing its pitch

    Hann frames are overlap-added at half-frame synthesis hops. Each analysis
    frame is taken within +-tolerance of its nominal position, at the offset
    that best continues the previously copied frame.
    """
    if target_length <= 0:
        raise PreconditionError(f"target length must be positive, got {target_length}")
    length = samples.shape[0]
    if length == 0:
        raise PreconditionError("cannot stretch an empty signal")

    frame = max(4, 2 * int(round(sample_rate * frame_ms / 2000.0)))
    hop = frame // 2
    tolerance = int(round(sample_rate * tolerance_ms / 1000.0))
    rate = length / target_length
    window = signal.get_window("hann", frame, fftbins=True)

    count = target_length // hop + 3
    # Output frame k covers output samples [(k - 1) * hop, (k - 1) * hop + frame)
    nominal = np.round((np.arange(count) - 1) * hop * rate).astype(np.int64)
    left = frame + tolerance + int(np.ceil(hop * rate))
    right = max(0, int(nominal[-1]) + frame + 2 * tolerance + hop - length) + frame
    padded = np.pad(samples, (left, right))

    out = np.zeros(count * hop + frame)
    norm = np.zeros_like(out)
    previous = None
    for k in range(count):
        position = left + int(nominal[k])
        if previous is not None:
            template = padded[previous + hop:previous + hop + frame]
            region = padded[position - tolerance:position + tolerance + frame]
            score = signal.correlate(region, template, mode="valid")
            position = position - tolerance + int(np.argmax(score))
        out[k * hop:k * hop + frame] += window * padded[position:position + frame]
        norm[k * hop:k * hop + frame] += window
        previous = position

    out = np.divide(out, norm, out=np.zeros_like(out), where=norm > 1e-8)
    return out[hop:hop + target_length]


def formant_shift(audio: AudioBuffer, formant_ratio: float) -> AudioBuffer:
    """
    Scale the spectral envelope by ``formant_ratio`` while keeping the duration

    The signal is resampled by 1 / ratio and played at the original rate,
    which scales every frequency (pitch included) by the ratio, then WSOLA
    restores the original length.
    """
    low, high = FORMANT_RATIO_RANGE
    if not low <= formant_ratio <= high:
        raise PreconditionError(f"formant ratio must lie in [{low}, {high}], got {formant_ratio}")
    if formant_ratio == 1.0:
        return audio
    length = len(audio)
    squeezed_length = max(1, int(round(length / formant_ratio)))
    squeezed = resample_by_ratio(audio.samples, rate_ratio(1.0 / formant_ratio), squeezed_length)
    return audio.with_samples(wsola(squeezed, length, audio.sample_rate))
