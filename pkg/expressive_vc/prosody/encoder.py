from typing import Literal

import numpy as np

from expressive_vc.autodiff import Tensor, concat, linear
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.prosody import ProsodyEncoderWeights, SpeakerEmbedding

from .normalize import conditional_affine, znorm_f0

logger = get_logger("prosody.encoder")

Activation = Literal["tanh", "identity"]


def f0_channel(f0: np.ndarray) -> np.ndarray:
    """znorm_f0 of the track, or zeros when no frame is voiced"""
    f0 = np.asarray(f0, dtype=np.float64)
    if not np.any(f0 > 0):
        logger.warning("No voiced frame; the f0 channel of H_p is zero")
        return np.zeros_like(f0)
    return znorm_f0(f0)


def prosody_forward(
    f0_norm: Tensor,
    energy: Tensor,
    spk: Tensor,
    w_gamma: Tensor,
    w_beta: Tensor,
    projection: Tensor,
    bias: Tensor,
    activation: Activation = "tanh",
) -> Tensor:
    """
    H_p from a normalized f0 track and raw energy

    The f0 channel gets the speaker-conditioned scale and shift, energy is
    appended unchanged, and the 2-channel result is projected to F.
    """
    if f0_norm.shape != energy.shape or f0_norm.ndim != 1:
        raise ShapeError(f"f0 {f0_norm.shape} and energy {energy.shape} must be equal-length vectors")
    frames = f0_norm.shape[0]
    scaled = conditional_affine(f0_norm.reshape(frames, 1), spk, w_gamma, w_beta)
    features = concat([scaled, energy.reshape(frames, 1)], axis=1)
    projected = linear(features, projection, bias)
    return projected.tanh() if activation == "tanh" else projected


def prosody_encode(
    f0: np.ndarray,
    energy: np.ndarray,
    spk: SpeakerEmbedding,
    weights: ProsodyEncoderWeights,
    activation: Activation = "tanh",
) -> np.ndarray:
    """
    Prosody feature H_p (T x F) from raw f0 in Hz and energy

    A track with no voiced frame contributes a zero f0 channel.

    Raises:
        ShapeError: If the tracks differ in length or the weights do not fit
    """
    f0 = np.asarray(f0, dtype=np.float64)
    energy = np.asarray(energy, dtype=np.float64)
    if f0.shape != energy.shape:
        raise ShapeError(f"f0 ({f0.shape}) and energy ({energy.shape}) lengths differ")
    out = prosody_forward(
        Tensor(f0_channel(f0)),
        Tensor(energy),
        Tensor(spk.values),
        Tensor(weights.cln.w_gamma),
        Tensor(weights.cln.w_beta),
        Tensor(weights.projection),
        Tensor(weights.bias),
        activation,
    )
    return out.numpy()
