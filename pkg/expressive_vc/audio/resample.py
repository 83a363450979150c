from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import signal

from expressive_vc.common.errors import PreconditionError
from expressive_vc.domain.audio import AudioBuffer

KAISER_BETA = 8.6
TAPS_PER_PHASE = 32
# Bound on the rational approximation of non-integer rate ratios
MAX_DENOMINATOR = 1000


@lru_cache(maxsize=64)
def _lowpass(up: int, down: int) -> np.ndarray:
    """Kaiser-windowed sinc prototype for the polyphase resampler"""
    rate = max(up, down)
    taps = TAPS_PER_PHASE * rate + 1
    return signal.firwin(taps, 1.0 / rate, window=("kaiser", KAISER_BETA))


def resample_by_ratio(samples: np.ndarray, ratio: Fraction, length: int) -> np.ndarray:
    """Band-limited rate change by ``ratio`` trimmed or zero-padded to ``length``"""
    up, down = ratio.numerator, ratio.denominator
    if up == down:
        out = samples.copy()
    else:
        out = signal.resample_poly(samples, up, down, window=_lowpass(up, down))
    if out.shape[0] >= length:
        return out[:length]
    return np.pad(out, (0, length - out.shape[0]))


def rate_ratio(value: float) -> Fraction:
    """Rational approximation of a rate ratio"""
    if value <= 0:
        raise PreconditionError(f"rate ratio must be positive, got {value}")
    return Fraction(value).limit_denominator(MAX_DENOMINATOR)


def resample(audio: AudioBuffer, target_rate: int) -> AudioBuffer:
    """
    Resample to ``target_rate`` with a polyphase windowed-sinc filter

    The output holds round(len * target / source) samples.
    """
    if target_rate <= 0:
        raise PreconditionError(f"target rate must be positive, got {target_rate}")
    if target_rate == audio.sample_rate:
        return audio
    ratio = Fraction(target_rate, audio.sample_rate)
    length = int(round(len(audio) * target_rate / audio.sample_rate))
    samples = resample_by_ratio(audio.samples, ratio, length)
    return AudioBuffer(samples=samples, sample_rate=target_rate)
