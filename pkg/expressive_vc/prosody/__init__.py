from typing import Optional

from expressive_vc.domain.audio import AudioBuffer, FrameConfig
from expressive_vc.domain.prosody import ProsodyTrack

from .pitch import extract_f0
from .energy import extract_energy
from .normalize import znorm_f0, cln, cln_tensor, conditional_affine
from .encoder import f0_channel, prosody_encode, prosody_forward
from .io import read_prosody_csv, write_prosody_csv


def extract_prosody(
    audio: AudioBuffer,
    frame_config: Optional[FrameConfig] = None,
    f_min: float = 50.0,
    f_max: float = 600.0,
    **yin_options: float,
) -> ProsodyTrack:
    """f0 and energy of one utterance on the shared frame grid"""
    frame_config = frame_config or FrameConfig()
    return ProsodyTrack(
        f0=extract_f0(audio, frame_config, f_min, f_max, **yin_options),
        energy=extract_energy(audio, frame_config),
        frame_config=frame_config,
    )


__all__ = [
    'extract_prosody',
    'extract_f0',
    'extract_energy',
    'znorm_f0',
    'cln',
    'cln_tensor',
    'conditional_affine',
    'f0_channel',
    'prosody_encode',
    'prosody_forward',
    'read_prosody_csv',
    'write_prosody_csv'
]
