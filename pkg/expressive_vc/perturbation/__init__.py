from .peq import parametric_eq, design_biquad, design_cascade
from .formant import formant_shift, wsola
from .pitch import pitch_randomize, target_f0
from .speed import speed_augment, sample_speed_factor
from .chain import perturb, sample_perturb_config

__all__ = [
    'parametric_eq',
    'design_biquad',
    'design_cascade',
    'formant_shift',
    'wsola',
    'pitch_randomize',
    'target_f0',
    'speed_augment',
    'sample_speed_factor',
    'perturb',
    'sample_perturb_config'
]
