"""Bottleneck-feature files and alignment to the shared frame grid.

BNF1 layout (little-endian): b"BNF1", u32 T, u32 D, u32 source_hop_ms, then
T * D float32 values in row-major order. A CSV fallback holds one frame per
line with comma-separated values.
"""
import struct
from pathlib import Path
from typing import Union

import numpy as np

from expressive_vc.common.errors import AudioFormatError, PreconditionError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.features import BnfMatrix

logger = get_logger("features.bnf")

MAGIC = b"BNF1"
HEADER = struct.Struct("<4sIII")


def encode_bnf(bnf: BnfMatrix) -> bytes:
    values = np.ascontiguousarray(bnf.values, dtype="<f4")
    return HEADER.pack(MAGIC, bnf.num_frames, bnf.dim, bnf.source_hop_ms) + values.tobytes()


def decode_bnf(payload: bytes, source: str = "<bytes>") -> BnfMatrix:
    if len(payload) < HEADER.size:
        raise AudioFormatError(f"{source}: truncated BNF1 header")
    magic, frames, dim, hop_ms = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise AudioFormatError(f"{source}: not a BNF1 file")
    expected = frames * dim * 4
    if len(payload) - HEADER.size != expected:
        raise AudioFormatError(
            f"{source}: header declares {frames}x{dim} values, "
            f"payload holds {(len(payload) - HEADER.size) // 4}"
        )
    values = np.frombuffer(payload, dtype="<f4", offset=HEADER.size).reshape(frames, dim)
    try:
        return BnfMatrix(values=values.astype(np.float32), source_hop_ms=hop_ms)
    except ValueError as e:
        raise AudioFormatError(f"{source}: {e}") from e


def read_bnf_csv(path: Path, source_hop_ms: int = 10) -> BnfMatrix:
    try:
        values = np.loadtxt(path, delimiter=",", dtype=np.float32, ndmin=2)
    except ValueError as e:
        raise AudioFormatError(f"{path}: malformed BNF CSV: {e}") from e
    try:
        return BnfMatrix(values=values, source_hop_ms=source_hop_ms)
    except ValueError as e:
        raise AudioFormatError(f"{path}: {e}") from e


def read_bnf(path: Union[str, Path]) -> BnfMatrix:
    """
    Read a BNF1 file, or the CSV fallback when the name ends in .csv

    Raises:
        FileNotFoundError: If the file does not exist
        AudioFormatError: On bad magic or a header/payload size mismatch
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"BNF file not found: {path}")
    if path.suffix.lower() == ".csv":
        bnf = read_bnf_csv(path)
    else:
        bnf = decode_bnf(path.read_bytes(), str(path))
    logger.debug(f"Read {bnf.num_frames}x{bnf.dim} BNFs from {path}")
    return bnf


def write_bnf(path: Union[str, Path], bnf: BnfMatrix) -> None:
    """Write BNF1, or CSV when the name ends in .csv"""
    path = Path(path)
    try:
        if path.suffix.lower() == ".csv":
            lines = [",".join(f"{v:.9g}" for v in row) for row in bnf.values]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            path.write_bytes(encode_bnf(bnf))
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e


def align_bnf(bnf: Union[BnfMatrix, np.ndarray], target_frames: int) -> np.ndarray:
    """
    Linearly interpolate BNF rows onto ``target_frames`` evenly spaced points

    The first and last rows map onto the first and last output frames.
    """
    values = bnf.values if isinstance(bnf, BnfMatrix) else np.asarray(bnf)
    values = values.astype(np.float64)
    source_frames = values.shape[0]
    if source_frames < 1:
        raise PreconditionError("cannot align an empty BNF matrix")
    if target_frames < 1:
        raise PreconditionError(f"target frame count must be positive, got {target_frames}")
    if source_frames == target_frames:
        return values.copy()
    if source_frames == 1:
        return np.repeat(values, target_frames, axis=0)
    if target_frames == 1:
        return values[:1].copy()

    position = np.linspace(0.0, source_frames - 1, target_frames)
    lower = np.minimum(np.floor(position).astype(np.int64), source_frames - 2)
    fraction = (position - lower)[:, None]
    return (1.0 - fraction) * values[lower] + fraction * values[lower + 1]
