import numpy as np
import pytest

from expressive_vc.common.errors import AudioFormatError
from expressive_vc.domain.prosody import ProsodyTrack
from expressive_vc.prosody import read_prosody_csv, write_prosody_csv


def test_round_trip(tmp_path):
    track = ProsodyTrack(f0=np.array([0.0, 220.5, 221.25]), energy=np.array([0.01, 0.2, 0.125]))
    path = tmp_path / "track.csv"
    write_prosody_csv(path, track)
    assert path.read_text().splitlines()[:2] == ["frame_index,f0_hz,energy", "0,0,0.01"]
    loaded = read_prosody_csv(path)
    assert np.array_equal(loaded.f0, track.f0)
    assert np.array_equal(loaded.energy, track.energy)


@pytest.mark.parametrize("content,match", [
    ("frame,f0,energy\n0,1,1\n", "header"),
    ("frame_index,f0_hz,energy\n0,abc,1\n", "malformed"),
    ("frame_index,f0_hz,energy\n0,100\n", "malformed"),
    ("frame_index,f0_hz,energy\n1,100,0.1\n", "out of order"),
])
def test_malformed_files(tmp_path, content, match):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(AudioFormatError, match=match):
        read_prosody_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_prosody_csv(tmp_path / "none.csv")
