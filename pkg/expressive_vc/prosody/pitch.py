"""YIN fundamental-frequency tracking on the shared frame grid."""
import numpy as np

from expressive_vc.audio.framing import frame_samples
from expressive_vc.common.errors import PreconditionError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.audio import AudioBuffer, FrameConfig

logger = get_logger("prosody.pitch")

YIN_THRESHOLD = 0.15
SILENCE_RMS = 1e-4
# A dip at or below this is taken as the period itself
OCTAVE_FLOOR = 0.02
OCTAVE_RATIO = 0.25
MAX_OCTAVE_MULTIPLE = 3


def difference_function(frames: np.ndarray, window: int, tau_max: int) -> np.ndarray:
    """
    YIN difference d(tau) = sum_j (x_j - x_{j+tau})^2 over ``window`` samples

    Args:
        frames: (T, N) frames with N >= window + tau_max
        window: Integration window length
        tau_max: Largest lag (inclusive)

    Returns:
        (T, tau_max + 1)
    """
    length = frames.shape[1]
    size = 1 << int(np.ceil(np.log2(length + window)))
    head = np.fft.rfft(frames[:, :window], size, axis=1)
    full = np.fft.rfft(frames, size, axis=1)
    cross = np.fft.irfft(np.conj(head) * full, size, axis=1)[:, :tau_max + 1]
    energy = np.concatenate(
        [np.zeros((frames.shape[0], 1)), np.cumsum(np.square(frames), axis=1)], axis=1
    )
    lags = np.arange(tau_max + 1)
    head_energy = energy[:, window][:, None]
    lag_energy = energy[:, lags + window] - energy[:, lags]
    return np.maximum(head_energy + lag_energy - 2.0 * cross, 0.0)


def cumulative_mean_normalized(diff: np.ndarray) -> np.ndarray:
    """d'(0) = 1, d'(tau) = d(tau) * tau / sum_{j<=tau} d(j)"""
    running = np.cumsum(diff[:, 1:], axis=1)
    lags = np.arange(1, diff.shape[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        normalized = np.where(running > 0, diff[:, 1:] * lags / running, 1.0)
    return np.concatenate([np.ones((diff.shape[0], 1)), normalized], axis=1)


def _refine(cmnd: np.ndarray, tau: int) -> float:
    """Parabolic interpolation around an integer minimum"""
    if tau <= 0 or tau >= cmnd.shape[0] - 1:
        return float(tau)
    left, centre, right = cmnd[tau - 1], cmnd[tau], cmnd[tau + 1]
    curvature = left - 2.0 * centre + right
    if curvature <= 0:
        return float(tau)
    return tau + 0.5 * (left - right) / curvature


def _pick_lag(cmnd: np.ndarray, tau_min: int, tau_max: int, threshold: float) -> float:
    candidates = np.nonzero(cmnd[tau_min:tau_max + 1] < threshold)[0]
    if candidates.size == 0:
        return 0.0
    tau = tau_min + int(candidates[0])
    while tau + 1 <= tau_max and cmnd[tau + 1] < cmnd[tau]:
        tau += 1
    return _refine(cmnd, _correct_octave(cmnd, tau, tau_max))


def _correct_octave(cmnd: np.ndarray, tau: int, tau_max: int) -> int:
    """
    Move to a multiple of ``tau`` whose dip is far deeper

    A signal dominated by its even harmonics dips under the threshold at half
    its period already; the full period then dips much lower.
    """
    if cmnd[tau] <= OCTAVE_FLOOR:
        return tau
    for multiple in range(2, MAX_OCTAVE_MULTIPLE + 1):
        radius = multiple + 1
        low = multiple * tau - radius
        if low > tau_max:
            break
        high = min(tau_max, multiple * tau + radius)
        candidate = low + int(np.argmin(cmnd[low:high + 1]))
        if cmnd[candidate] < OCTAVE_RATIO * cmnd[tau]:
            return candidate
    return tau


def extract_f0(
    audio: AudioBuffer,
    frame_config: FrameConfig,
    f_min: float = 50.0,
    f_max: float = 600.0,
    threshold: float = YIN_THRESHOLD,
    silence_rms: float = SILENCE_RMS,
) -> np.ndarray:
    """
    Per-frame f0 in Hz by YIN, 0 for unvoiced frames

    Raises:
        PreconditionError: If the pitch range is invalid or the audio is
            shorter than one frame
    """
    sample_rate = audio.sample_rate
    if not 0 < f_min < f_max < sample_rate / 2:
        raise PreconditionError(
            f"need 0 < f_min < f_max < {sample_rate / 2}, got {f_min}, {f_max}"
        )
    frame_length = frame_config.frame_length(sample_rate)
    if len(audio) < frame_length:
        raise PreconditionError(
            f"audio of {len(audio)} samples is shorter than one frame ({frame_length})"
        )
    tau_min = max(1, int(np.floor(sample_rate / f_max)))
    tau_max = int(np.ceil(sample_rate / f_min))
    window = frame_length - tau_max
    if window < tau_max:
        raise PreconditionError(
            f"frame of {frame_length} samples cannot resolve f_min={f_min} Hz"
        )

    frames = frame_samples(audio.samples, frame_length, frame_config.hop_length(sample_rate))
    cmnd = cumulative_mean_normalized(difference_function(frames, window, tau_max))
    rms = np.sqrt(np.mean(np.square(frames), axis=1))

    f0 = np.zeros(frames.shape[0])
    for index in range(frames.shape[0]):
        if rms[index] < silence_rms:
            continue
        lag = _pick_lag(cmnd[index], tau_min, tau_max, threshold)
        if lag > 0:
            frequency = sample_rate / lag
            if f_min <= frequency <= f_max:
                f0[index] = frequency

    voiced = int(np.count_nonzero(f0))
    logger.debug(f"YIN: {voiced}/{f0.shape[0]} frames voiced")
    return f0
