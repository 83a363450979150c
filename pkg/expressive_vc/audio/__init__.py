from .io import read_wav, write_wav
from .resample import resample, resample_by_ratio, rate_ratio
from .framing import frame_signal, frame_samples, frame_window

__all__ = [
    'read_wav',
    'write_wav',
    'resample',
    'resample_by_ratio',
    'rate_ratio',
    'frame_signal',
    'frame_samples',
    'frame_window'
]
