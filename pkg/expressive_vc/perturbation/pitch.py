"""Pitch shifting and range scaling by TD-PSOLA."""
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import signal

from expressive_vc.common.errors import PreconditionError, ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.audio import AudioBuffer, FrameConfig
from expressive_vc.domain.perturbation import RATIO_BOUNDS, PitchShiftResult
from expressive_vc.domain.prosody import ProsodyTrack

logger = get_logger("perturbation.pitch")

# Epoch search window around the expected next epoch, in periods
EPOCH_SEARCH = (0.75, 1.25)


def target_f0(
    f0: np.ndarray,
    shift_ratio: float,
    range_ratio: float,
    reference_median: Optional[float] = None,
) -> np.ndarray:
    """
    f0'(t) = shift * ref * (f0(t) / median)^range on voiced frames, 0 elsewhere

    ``ref`` defaults to the median voiced f0 of the track itself.
    """
    voiced = f0 > 0
    out = np.zeros_like(f0, dtype=np.float64)
    if not np.any(voiced):
        return out
    median = float(np.median(f0[voiced]))
    reference = median if reference_median is None else reference_median
    out[voiced] = shift_ratio * reference * np.power(f0[voiced] / median, range_ratio)
    return out


def voiced_segments(voiced: np.ndarray) -> List[Tuple[int, int]]:
    """Inclusive (first, last) frame index of every run of voiced frames"""
    edges = np.diff(np.concatenate([[0], voiced.astype(np.int8), [0]]))
    starts = np.nonzero(edges == 1)[0]
    stops = np.nonzero(edges == -1)[0] - 1
    return list(zip(starts.tolist(), stops.tolist()))


def find_epochs(
    samples: np.ndarray, start: int, end: int, periods: np.ndarray, hop: int, first_frame: int
) -> np.ndarray:
    """
    Analysis epochs: the largest |x| in the first period, then in a window
    around one local period after each previous epoch
    """
    def period_at(position: int) -> int:
        frame = int(np.clip(round(position / hop), first_frame, first_frame + len(periods) - 1))
        return int(periods[frame - first_frame])

    epochs = []
    low, high = start, min(end, start + period_at(start))
    magnitude = np.abs(samples)
    while high > low:
        epoch = low + int(np.argmax(magnitude[low:high]))
        epochs.append(epoch)
        period = period_at(epoch)
        low = epoch + max(1, int(EPOCH_SEARCH[0] * period))
        high = min(end, epoch + int(EPOCH_SEARCH[1] * period) + 1)
    return np.array(epochs, dtype=np.int64)


def _resynthesize(
    samples: np.ndarray,
    out: np.ndarray,
    epochs: np.ndarray,
    span: Tuple[int, int],
    sample_rate: int,
    f0: np.ndarray,
    target: np.ndarray,
    hop: int,
    frames: Tuple[int, int],
) -> None:
    """
    Overlap-add grains of the nearest analysis epoch at synthesis marks

    Marks advance by the local target period. A grain reaches the shorter
    of the analysis and synthesis periods to each side of its epoch.
    """
    first_frame, last_frame = frames

    def frame_of(position: float) -> int:
        return int(np.clip(round(position / hop), first_frame, last_frame))

    max_period = int(np.ceil(sample_rate / f0[first_frame:last_frame + 1].min()))
    padded = np.pad(samples, (max_period, max_period))
    acc = np.zeros_like(padded)
    weight = np.zeros_like(padded)

    mark = float(epochs[0])
    while mark <= epochs[-1]:
        index = int(np.clip(np.searchsorted(epochs, mark), 0, len(epochs) - 1))
        if index > 0 and abs(epochs[index - 1] - mark) <= abs(epochs[index] - mark):
            index -= 1
        epoch = int(epochs[index])
        synthesis_period = sample_rate / target[frame_of(mark)]
        analysis_period = sample_rate / f0[frame_of(epoch)]
        half = max(1, int(round(min(analysis_period, synthesis_period))))
        window = signal.get_window("hann", 2 * half + 1, fftbins=False)
        grain = padded[epoch + max_period - half:epoch + max_period + half + 1] * window
        centre = int(round(mark)) + max_period
        acc[centre - half:centre + half + 1] += grain
        weight[centre - half:centre + half + 1] += window
        mark += synthesis_period

    start, end = span
    acc = acc[max_period + start:max_period + end]
    weight = weight[max_period + start:max_period + end]
    # Between the first and last epoch only grains sound; the edges fade into the input
    inner = np.zeros(end - start, dtype=bool)
    inner[epochs[0] - start:epochs[-1] - start + 1] = True
    fade = 1.0 - np.clip(weight, 0.0, 1.0)
    out[start:end] = np.where(inner, acc, acc + fade * samples[start:end])


def pitch_randomize(
    audio: AudioBuffer,
    shift_ratio: float,
    range_ratio: float,
    f0_track: Union[ProsodyTrack, np.ndarray],
    frame_config: Optional[FrameConfig] = None,
    reference_median: Optional[float] = None,
) -> PitchShiftResult:
    """
    TD-PSOLA resynthesis toward f0'(t) on voiced frames; unvoiced samples are copied

    Args:
        audio: Signal whose pitch is changed
        shift_ratio: Multiplier of the reference median f0
        range_ratio: Exponent scaling the excursions around the median
        f0_track: Per-frame f0 of ``audio`` on the shared grid
        frame_config: Grid of a bare f0 array (taken from the track otherwise)
        reference_median: Median the shift applies to; defaults to the track's own

    Returns:
        Resynthesized audio; unchanged with ``voiced=False`` if nothing is voiced
    """
    low, high = RATIO_BOUNDS
    for name, ratio in (("shift", shift_ratio), ("range", range_ratio)):
        if not low < ratio < high:
            raise PreconditionError(f"pitch {name} ratio must lie in ({low}, {high}), got {ratio}")
    if isinstance(f0_track, ProsodyTrack):
        frame_config = f0_track.frame_config
        f0 = f0_track.f0
    else:
        f0 = np.asarray(f0_track, dtype=np.float64)
        frame_config = frame_config or FrameConfig()

    sample_rate = audio.sample_rate
    hop = frame_config.hop_length(sample_rate)
    expected = frame_config.num_frames(len(audio), sample_rate)
    if f0.shape != (expected,):
        raise ShapeError(f"f0 track has {f0.shape[0]} frames, audio spans {expected}")

    voiced = f0 > 0
    if not np.any(voiced):
        logger.warning("Pitch randomization skipped: no voiced frame")
        return PitchShiftResult(audio=audio, voiced=False)
    if shift_ratio == 1.0 and range_ratio == 1.0 and reference_median is None:
        return PitchShiftResult(audio=audio)

    target = target_f0(f0, shift_ratio, range_ratio, reference_median)
    samples = audio.samples
    out = samples.copy()
    for first, last in voiced_segments(voiced):
        start = max(0, first * hop - hop // 2)
        end = min(len(audio), last * hop + hop - hop // 2)
        periods = np.round(sample_rate / f0[first:last + 1]).astype(np.int64)
        epochs = find_epochs(samples, start, end, periods, hop, first)
        if len(epochs) < 2:
            continue
        _resynthesize(
            samples, out, epochs, (start, end), sample_rate, f0, target, hop, (first, last)
        )
    return PitchShiftResult(audio=audio.with_samples(out))
