"""Parametric equalizer built from RBJ cookbook biquads."""
import math
from typing import Sequence

import numpy as np
from scipy import signal

from expressive_vc.common.errors import ParameterError, PreconditionError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.domain.perturbation import BiquadCoeffs, PeqBand

logger = get_logger("perturbation.peq")


def design_biquad(band: PeqBand, sample_rate: int) -> BiquadCoeffs:
    """Coefficients of one band, normalized by a0"""
    nyquist = sample_rate / 2.0
    if not 0 < band.center_hz < nyquist:
        raise PreconditionError(
            f"band at {band.center_hz} Hz is not below Nyquist ({nyquist} Hz)"
        )
    w0 = 2.0 * math.pi * band.center_hz / sample_rate
    cos_w0 = math.cos(w0)
    alpha = math.sin(w0) / (2.0 * band.q)
    a = 10.0 ** (band.gain_db / 40.0)

    if band.kind == "peaking":
        b0, b1, b2 = 1 + alpha * a, -2 * cos_w0, 1 - alpha * a
        a0, a1, a2 = 1 + alpha / a, -2 * cos_w0, 1 - alpha / a
    elif band.kind == "low_shelf":
        root = 2 * math.sqrt(a) * alpha
        b0 = a * ((a + 1) - (a - 1) * cos_w0 + root)
        b1 = 2 * a * ((a - 1) - (a + 1) * cos_w0)
        b2 = a * ((a + 1) - (a - 1) * cos_w0 - root)
        a0 = (a + 1) + (a - 1) * cos_w0 + root
        a1 = -2 * ((a - 1) + (a + 1) * cos_w0)
        a2 = (a + 1) + (a - 1) * cos_w0 - root
    else:
        root = 2 * math.sqrt(a) * alpha
        b0 = a * ((a + 1) + (a - 1) * cos_w0 + root)
        b1 = -2 * a * ((a - 1) + (a + 1) * cos_w0)
        b2 = a * ((a + 1) + (a - 1) * cos_w0 - root)
        a0 = (a + 1) - (a - 1) * cos_w0 + root
        a1 = 2 * ((a - 1) - (a + 1) * cos_w0)
        a2 = (a + 1) - (a - 1) * cos_w0 - root

    return BiquadCoeffs(b0=b0 / a0, b1=b1 / a0, b2=b2 / a0, a1=a1 / a0, a2=a2 / a0)


def design_cascade(bands: Sequence[PeqBand], sample_rate: int) -> list[BiquadCoeffs]:
    """
    Biquads of every band, checked for stability

    Raises:
        ParameterError: If any section has a pole on or outside the unit circle
    """
    sections = []
    for band in bands:
        coeffs = design_biquad(band, sample_rate)
        if not coeffs.is_stable():
            raise ParameterError(
                f"unstable {band.kind} band at {band.center_hz} Hz "
                f"(q={band.q}, gain={band.gain_db} dB)"
            )
        sections.append(coeffs)
    return sections


def parametric_eq(audio: AudioBuffer, bands: Sequence[PeqBand]) -> AudioBuffer:
    """Serial biquad cascade; output length equals input length"""
    sections = design_cascade(bands, audio.sample_rate)
    if not sections:
        return audio
    sos = np.array([section.as_sos() for section in sections])
    logger.debug(f"Applying {len(sections)} EQ sections")
    return audio.with_samples(signal.sosfilt(sos, audio.samples))
