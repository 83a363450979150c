"""The perturbation chain: pitch randomization of formant shifting of EQ."""
from typing import Optional

import numpy as np

from expressive_vc.common.logging import get_logger
from expressive_vc.common.seeding import make_rng
from expressive_vc.domain.audio import AudioBuffer, FrameConfig
from expressive_vc.domain.config import PerturbationRanges
from expressive_vc.domain.perturbation import PeqBand, PerturbConfig
from expressive_vc.prosody.pitch import extract_f0

from .formant import formant_shift
from .peq import parametric_eq
from .pitch import pitch_randomize

logger = get_logger("perturbation.chain")

# Upper edge of the sampled EQ bands as a fraction of the sample rate
BAND_CEILING = 0.45


def _ratio(rng: np.random.Generator, bounds: tuple[float, float], invert_probability: float) -> float:
    value = float(rng.uniform(*bounds))
    if rng.random() < invert_probability:
        value = 1.0 / value
    return value


def sample_perturb_config(
    seed: int, sample_rate: int, ranges: Optional[PerturbationRanges] = None
) -> PerturbConfig:
    """
    Draw a perturbation from the configured ranges

    Ratios are uniform in their range and inverted with the configured
    probability. EQ bands are log-spaced peaking filters, plus low and high
    shelves, with uniform Q and gain. The draw is a pure function of the seed.
    """
    ranges = ranges or PerturbationRanges()
    rng = make_rng(seed, "perturbation")

    formant_ratio = _ratio(rng, ranges.formant_ratio, ranges.invert_probability)
    pitch_shift_ratio = _ratio(rng, ranges.pitch_shift_ratio, ranges.invert_probability)
    pitch_range_ratio = _ratio(rng, ranges.pitch_range_ratio, ranges.invert_probability)

    top = min(ranges.peq_max_hz, BAND_CEILING * sample_rate)
    bands = []
    if ranges.peq_bands:
        centres = np.geomspace(ranges.peq_min_hz, top, ranges.peq_bands)
        q_values = rng.uniform(*ranges.peq_q, size=ranges.peq_bands)
        gains = rng.uniform(*ranges.peq_gain_db, size=ranges.peq_bands)
        bands = [
            PeqBand(center_hz=float(c), q=float(q), gain_db=float(g), kind="peaking")
            for c, q, g in zip(centres, q_values, gains)
        ]
    if ranges.shelves:
        low_gain, high_gain = rng.uniform(*ranges.peq_gain_db, size=2)
        bands.insert(0, PeqBand(
            center_hz=ranges.peq_min_hz, q=ranges.shelf_q, gain_db=float(low_gain), kind="low_shelf"
        ))
        bands.append(PeqBand(
            center_hz=float(top), q=ranges.shelf_q, gain_db=float(high_gain), kind="high_shelf"
        ))

    return PerturbConfig(
        seed=seed,
        peq=bands,
        formant_ratio=formant_ratio,
        pitch_shift_ratio=pitch_shift_ratio,
        pitch_range_ratio=pitch_range_ratio,
    )


def perturb(
    audio: AudioBuffer,
    config: PerturbConfig,
    frame_config: Optional[FrameConfig] = None,
    f_min: float = 50.0,
    f_max: float = 600.0,
) -> AudioBuffer:
    """
    pr(fs(peq(audio))) for one sampled configuration

    Pitch is tracked once on the input, since equalization leaves it in
    place. Formant shifting scales that track by the formant ratio, and
    pitch randomization targets the shift ratio times the source median, so
    the output median f0 follows the shift ratio alone.
    """
    frame_config = frame_config or FrameConfig()
    equalized = parametric_eq(audio, config.peq)
    shifted = formant_shift(equalized, config.formant_ratio)

    if config.pitch_shift_ratio == 1.0 and config.pitch_range_ratio == 1.0 \
            and config.formant_ratio == 1.0:
        return shifted

    source_f0 = extract_f0(audio, frame_config, f_min, f_max)
    voiced = source_f0 > 0
    if not np.any(voiced):
        logger.warning("No voiced frame in input; pitch randomization left out")
        return shifted
    reference = float(np.median(source_f0[voiced]))
    result = pitch_randomize(
        shifted,
        config.pitch_shift_ratio,
        config.pitch_range_ratio,
        source_f0 * config.formant_ratio,
        frame_config=frame_config,
        reference_median=reference,
    )
    return result.audio
