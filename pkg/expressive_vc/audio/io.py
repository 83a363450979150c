from pathlib import Path
from typing import Literal, Union

import numpy as np
import soundfile as sf

from expressive_vc.common.errors import AudioFormatError, PreconditionError, UnsupportedFormatError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.audio import AudioBuffer

logger = get_logger("audio.io")

BitDepth = Literal[16, 32]

SUPPORTED_SUBTYPES = {"PCM_16", "FLOAT"}
PCM16_SCALE = 32768.0


def read_wav(path: Union[str, Path]) -> AudioBuffer:
    """
    Read a 16-bit integer or 32-bit float RIFF/WAVE file

    Stereo input is downmixed by averaging the channels; integer samples
    are scaled by 2^-15.

    Raises:
        FileNotFoundError: If the file does not exist
        AudioFormatError: If the header or payload is malformed
        UnsupportedFormatError: For other codecs, bit depths or channel counts
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Audio file not found: {path}")

    try:
        info = sf.info(str(path))
    except (sf.LibsndfileError, RuntimeError) as e:
        raise AudioFormatError(f"{path}: cannot parse WAV header: {e}") from e

    if info.format != "WAV" or info.subtype not in SUPPORTED_SUBTYPES:
        raise UnsupportedFormatError(
            f"{path}: unsupported format {info.format}/{info.subtype}; "
            "expected WAV with PCM_16 or FLOAT samples"
        )
    if info.channels not in (1, 2):
        raise UnsupportedFormatError(f"{path}: {info.channels} channels, expected mono or stereo")

    try:
        data, sample_rate = sf.read(str(path), dtype="float64", always_2d=True)
    except (sf.LibsndfileError, RuntimeError) as e:
        raise AudioFormatError(f"{path}: cannot read samples: {e}") from e

    if data.shape[0] != info.frames:
        raise AudioFormatError(f"{path}: expected {info.frames} frames, read {data.shape[0]}")

    samples = data[:, 0] if data.shape[1] == 1 else data.mean(axis=1)
    logger.debug(f"Read {path}: {len(samples)} samples at {sample_rate} Hz, {info.subtype}")
    return AudioBuffer(samples=samples, sample_rate=int(sample_rate))


def write_wav(path: Union[str, Path], audio: AudioBuffer, bit_depth: BitDepth = 32) -> None:
    """
    Write mono audio as 16-bit PCM or 32-bit float WAV

    Samples outside [-1, 1] are clipped with a warning.

    Raises:
        PreconditionError: If the buffer is empty or the bit depth unsupported
        OSError: If the file cannot be written
    """
    path = Path(path)
    if len(audio) == 0:
        raise PreconditionError(f"refusing to write an empty buffer to {path}")
    if bit_depth not in (16, 32):
        raise PreconditionError(f"bit depth must be 16 or 32, got {bit_depth}")

    samples = audio.samples
    clipped = int(np.count_nonzero(np.abs(samples) > 1.0))
    if clipped:
        logger.warning(f"Clipping {clipped} samples outside [-1, 1] while writing {path}")
        samples = np.clip(samples, -1.0, 1.0)

    if bit_depth == 16:
        # Quantize here so reading back divides by the same 2^15
        data = np.clip(np.round(samples * PCM16_SCALE), -32768, 32767).astype(np.int16)
        subtype = "PCM_16"
    else:
        data = samples.astype(np.float32)
        subtype = "FLOAT"

    try:
        sf.write(str(path), data, samplerate=audio.sample_rate, subtype=subtype, format="WAV")
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise OSError(f"Cannot write {path}: {e}") from e
    logger.debug(f"Wrote {path}: {len(audio)} samples, {subtype}")
