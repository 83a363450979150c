import csv
from pathlib import Path
from typing import Union

import numpy as np

from expressive_vc.common.errors import AudioFormatError
from expressive_vc.domain.audio import FrameConfig
from expressive_vc.domain.prosody import ProsodyTrack

HEADER = ["frame_index", "f0_hz", "energy"]


def write_prosody_csv(path: Union[str, Path], track: ProsodyTrack) -> None:
    """One row per frame: frame_index, f0_hz, energy"""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(HEADER)
            for index, (f0, energy) in enumerate(zip(track.f0, track.energy)):
                writer.writerow([index, f"{f0:.9g}", f"{energy:.9g}"])
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e


def read_prosody_csv(path: Union[str, Path], frame_config: FrameConfig = FrameConfig()) -> ProsodyTrack:
    """
    Read a track written by write_prosody_csv

    Raises:
        FileNotFoundError: If the file does not exist
        AudioFormatError: If the header or a row is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Prosody file not found: {path}")
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows or rows[0] != HEADER:
        raise AudioFormatError(f"{path}: expected header {','.join(HEADER)}")
    f0, energy = [], []
    for line, row in enumerate(rows[1:], start=2):
        try:
            index, f0_hz, rms = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise AudioFormatError(f"{path}:{line}: malformed row {row}")
        if index != line - 2:
            raise AudioFormatError(f"{path}:{line}: frame index {index} out of order")
        f0.append(f0_hz)
        energy.append(rms)
    return ProsodyTrack(f0=np.array(f0), energy=np.array(energy), frame_config=frame_config)
