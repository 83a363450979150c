from .bnf import read_bnf, write_bnf, align_bnf, encode_bnf, decode_bnf
from .encoders import (
    bnf_encode, pwav_encode, bnf_forward, pwav_forward, ConvBlock, blocks_of, fit_frames
)
from .spectral import spectral_bnf
from .weights import (
    init_bnf_encoder,
    init_pwav_encoder,
    init_prosody_encoder,
    init_speaker_embedding,
    encoder_to_tensors,
    encoder_from_tensors,
    prosody_to_tensors,
    prosody_from_tensors,
)

__all__ = [
    'read_bnf',
    'write_bnf',
    'align_bnf',
    'encode_bnf',
    'decode_bnf',
    'bnf_encode',
    'pwav_encode',
    'bnf_forward',
    'pwav_forward',
    'ConvBlock',
    'blocks_of',
    'fit_frames',
    'spectral_bnf',
    'init_bnf_encoder',
    'init_pwav_encoder',
    'init_prosody_encoder',
    'init_speaker_embedding',
    'encoder_to_tensors',
    'encoder_from_tensors',
    'prosody_to_tensors',
    'prosody_from_tensors'
]
