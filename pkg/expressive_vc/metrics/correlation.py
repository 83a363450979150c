"""Prosody correlation between a source utterance and its conversion."""
from typing import Optional

import numpy as np

from expressive_vc.common.errors import ShapeError, UndefinedCorrelationError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.metrics import CorrelationReport, F0Summary
from expressive_vc.domain.prosody import ProsodyTrack

logger = get_logger("metrics.correlation")


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """
    Pearson correlation coefficient, clipped to [-1, 1]

    Raises:
        ShapeError: If the sequences differ in length
        UndefinedCorrelationError: If fewer than two points or either side is constant
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError(f"pearson needs equal-length vectors, got {x.shape} and {y.shape}")
    if x.shape[0] < 2:
        raise UndefinedCorrelationError(f"need at least 2 points, got {x.shape[0]}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.sum(dx * dx)
    syy = np.sum(dy * dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant sequence")
    r = np.sum(dx * dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def _log_f0_correlation(f0_a: np.ndarray, f0_b: np.ndarray) -> tuple[Optional[float], int]:
    voiced = (f0_a > 0) & (f0_b > 0)
    count = int(voiced.sum())
    if count < 2:
        logger.warning(f"Only {count} jointly voiced frames; log-f0 correlation is undefined")
        return None, count
    try:
        return pearson(np.log(f0_a[voiced]), np.log(f0_b[voiced])), count
    except UndefinedCorrelationError as e:
        logger.warning(f"Log-f0 correlation is undefined: {e}")
        return None, count


def correlate_prosody(a: ProsodyTrack, b: ProsodyTrack) -> CorrelationReport:
    """
    Log-f0 correlation over jointly voiced frames and energy correlation over
    all frames, after truncating both tracks to the shorter length

    lf0_r is None when it is undefined; energy_r must be defined.

    Raises:
        UndefinedCorrelationError: If the energy correlation is undefined
    """
    frames = min(len(a), len(b))
    if len(a) != len(b):
        logger.info(f"Truncating prosody tracks of {len(a)} and {len(b)} frames to {frames}")
    lf0_r, voiced = _log_f0_correlation(a.f0[:frames], b.f0[:frames])
    energy_r = pearson(a.energy[:frames], b.energy[:frames])
    return CorrelationReport(
        lf0_r=lf0_r, energy_r=energy_r, n_frames_used=frames, n_voiced_used=voiced
    )


def f0_summary(f0: np.ndarray) -> F0Summary:
    """Voicing ratio and Hz statistics over voiced frames"""
    f0 = np.asarray(f0, dtype=np.float64)
    voiced = f0[f0 > 0]
    frames = int(f0.shape[0])
    if voiced.size == 0:
        return F0Summary(n_frames=frames, n_voiced=0, voiced_ratio=0.0)
    return F0Summary(
        n_frames=frames,
        n_voiced=int(voiced.size),
        voiced_ratio=voiced.size / frames,
        mean_hz=float(voiced.mean()),
        median_hz=float(np.median(voiced)),
        std_hz=float(voiced.std()),
        min_hz=float(voiced.min()),
        max_hz=float(voiced.max()),
    )
