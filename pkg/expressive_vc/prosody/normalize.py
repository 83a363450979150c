from typing import Union

import numpy as np

from expressive_vc.autodiff import Tensor
from expressive_vc.common.errors import ShapeError, UnnormalizableError
from expressive_vc.domain.prosody import CLNParams, SpeakerEmbedding

# Voiced tracks with a smaller spread normalize to zero
SIGMA_FLOOR = 1e-6
LAYER_NORM_EPS = 1e-5


def znorm_f0(f0: np.ndarray) -> np.ndarray:
    """
    Utterance-level z-score over voiced frames; unvoiced frames stay 0

    Raises:
        UnnormalizableError: If no frame is voiced
    """
    f0 = np.asarray(f0, dtype=np.float64)
    voiced = f0 > 0
    if not np.any(voiced):
        raise UnnormalizableError("f0 track has no voiced frame to normalize over")
    mean = f0[voiced].mean()
    sigma = f0[voiced].std()
    out = np.zeros_like(f0)
    if sigma >= SIGMA_FLOOR:
        out[voiced] = (f0[voiced] - mean) / sigma
    return out


def _speaker_terms(spk: Tensor, w_gamma: Tensor, w_beta: Tensor, channels: int):
    if spk.ndim != 1:
        raise ShapeError(f"speaker embedding must be a vector, got {spk.shape}")
    for name, weight in (("W_gamma", w_gamma), ("W_beta", w_beta)):
        if weight.shape != (channels, spk.shape[0]):
            raise ShapeError(
                f"{name} {weight.shape} does not map a {spk.shape[0]}-dim speaker "
                f"embedding onto {channels} channels"
            )
    return w_gamma @ spk + 1.0, w_beta @ spk


def conditional_affine(x: Tensor, spk: Tensor, w_gamma: Tensor, w_beta: Tensor) -> Tensor:
    """gamma(spk) * x + beta(spk) per channel, x is (T, C)"""
    if x.ndim != 2:
        raise ShapeError(f"expected a (T, C) feature matrix, got {x.shape}")
    gamma, beta = _speaker_terms(spk, w_gamma, w_beta, x.shape[1])
    return x * gamma + beta


def cln_tensor(
    x: Tensor, spk: Tensor, w_gamma: Tensor, w_beta: Tensor, eps: float = LAYER_NORM_EPS
) -> Tensor:
    """Conditional layer norm: normalize each frame over channels, then speaker affine"""
    if x.ndim != 2:
        raise ShapeError(f"expected a (T, C) feature matrix, got {x.shape}")
    return conditional_affine(x.layer_norm(axis=-1, eps=eps), spk, w_gamma, w_beta)


def cln(
    x: Union[np.ndarray, Tensor], spk: SpeakerEmbedding, params: CLNParams
) -> np.ndarray:
    """Conditional layer norm on a T x C feature matrix"""
    out = cln_tensor(
        Tensor.lift(x), Tensor(spk.values), Tensor(params.w_gamma), Tensor(params.w_beta)
    )
    return out.numpy()
