import numpy as np

from expressive_vc.audio.resample import rate_ratio, resample_by_ratio
from expressive_vc.common.errors import PreconditionError
from expressive_vc.domain.audio import AudioBuffer

SPEED_FACTOR_RANGE = (1.0, 2.0)


def speed_augment(audio: AudioBuffer, factor: float) -> AudioBuffer:
    """Playback-rate change: duration divides by ``factor``, pitch multiplies by it"""
    low, high = SPEED_FACTOR_RANGE
    if not low <= factor <= high:
        raise PreconditionError(f"speed factor must lie in [{low}, {high}], got {factor}")
    if factor == 1.0:
        return audio
    length = max(1, int(round(len(audio) / factor)))
    return audio.with_samples(resample_by_ratio(audio.samples, rate_ratio(1.0 / factor), length))


def sample_speed_factor(rng: np.random.Generator, bounds: tuple[float, float]) -> float:
    """Uniform speed multiplier within ``bounds``"""
    low, high = bounds
    return float(rng.uniform(low, high))
