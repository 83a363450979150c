"""TSR1 named-tensor files.

Layout (little-endian): b"TSR1", u32 tensor count, then per tensor a u8
name length, the UTF-8 name, u32 rank, rank x u32 dims and the float32
payload in C order.
"""
import struct
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from expressive_vc.common.errors import AudioFormatError, ParameterError
from expressive_vc.common.logging import get_logger

logger = get_logger("autodiff.serialization")

MAGIC = b"TSR1"


def encode_tensors(tensors: Mapping[str, np.ndarray]) -> bytes:
    chunks = [MAGIC, struct.pack("<I", len(tensors))]
    for name, value in tensors.items():
        encoded = name.encode("utf-8")
        if not 0 < len(encoded) < 256:
            raise ParameterError(f"tensor name must be 1-255 bytes, got '{name}'")
        array = np.asarray(value, dtype="<f4")
        chunks.append(struct.pack("<B", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<I", array.ndim))
        chunks.append(struct.pack(f"<{array.ndim}I", *array.shape))
        chunks.append(array.tobytes(order="C"))
    return b"".join(chunks)


def decode_tensors(payload: bytes, source: str = "<bytes>") -> Dict[str, np.ndarray]:
    """Parse a TSR1 blob into float32 arrays keyed by name"""
    view = memoryview(payload)
    offset = 0

    def take(size: int) -> memoryview:
        nonlocal offset
        if offset + size > len(view):
            raise AudioFormatError(f"{source}: truncated TSR1 data at byte {offset}")
        chunk = view[offset:offset + size]
        offset += size
        return chunk

    if bytes(take(4)) != MAGIC:
        raise AudioFormatError(f"{source}: not a TSR1 file")
    (count,) = struct.unpack("<I", take(4))
    tensors: Dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_length,) = struct.unpack("<B", take(1))
        try:
            name = bytes(take(name_length)).decode("utf-8")
        except UnicodeDecodeError:
            raise AudioFormatError(f"{source}: tensor name is not UTF-8")
        (rank,) = struct.unpack("<I", take(4))
        shape = struct.unpack(f"<{rank}I", take(4 * rank))
        size = int(np.prod(shape, dtype=np.int64))
        data = np.frombuffer(take(4 * size), dtype="<f4").reshape(shape)
        if name in tensors:
            raise AudioFormatError(f"{source}: duplicate tensor '{name}'")
        tensors[name] = data.astype(np.float32)
    if offset != len(view):
        raise AudioFormatError(f"{source}: {len(view) - offset} trailing bytes after last tensor")
    return tensors


def save_tensors(path: Union[str, Path], tensors: Mapping[str, np.ndarray]) -> None:
    """Write named tensors as TSR1"""
    path = Path(path)
    payload = encode_tensors(tensors)
    try:
        path.write_bytes(payload)
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e
    logger.debug(f"Wrote {len(tensors)} tensors to {path}")


def load_tensors(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Read a TSR1 file

    Raises:
        FileNotFoundError: If the file does not exist
        AudioFormatError: If the header or payload is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Tensor file not found: {path}")
    tensors = decode_tensors(path.read_bytes(), str(path))
    logger.debug(f"Read {len(tensors)} tensors from {path}")
    return tensors
