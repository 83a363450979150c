"""Seeded He-uniform initialization and TSR1 naming of encoder weights."""
from typing import Dict, Mapping, Sequence

import numpy as np

from expressive_vc.common.errors import AudioFormatError
from expressive_vc.domain.features import ConvLayerWeights, EncoderWeights
from expressive_vc.domain.prosody import CLNParams, ProsodyEncoderWeights, SpeakerEmbedding


def he_uniform(rng: np.random.Generator, shape: Sequence[int], fan_in: int) -> np.ndarray:
    bound = np.sqrt(6.0 / max(1, fan_in))
    return rng.uniform(-bound, bound, size=tuple(shape))


def init_conv_layer(
    rng: np.random.Generator, in_channels: int, out_channels: int, kernel_size: int, stride: int = 1
) -> ConvLayerWeights:
    return ConvLayerWeights(
        kernel=he_uniform(rng, (out_channels, in_channels, kernel_size), in_channels * kernel_size),
        bias=np.zeros(out_channels),
        ln_scale=np.ones(out_channels),
        ln_shift=np.zeros(out_channels),
        stride=stride,
    )


def init_bnf_encoder(
    rng: np.random.Generator, bnf_dim: int, feature_dim: int, kernel_size: int = 5, layers: int = 2
) -> EncoderWeights:
    channels = [bnf_dim] + [feature_dim] * layers
    return EncoderWeights(layers=[
        init_conv_layer(rng, c_in, c_out, kernel_size)
        for c_in, c_out in zip(channels[:-1], channels[1:])
    ])


def init_pwav_encoder(
    rng: np.random.Generator,
    strides: Sequence[int],
    hidden_channels: Sequence[int],
    feature_dim: int,
) -> EncoderWeights:
    """Kernel size is twice each stride; channels run 1 -> hidden... -> F"""
    channels = [1] + list(hidden_channels) + [feature_dim]
    return EncoderWeights(layers=[
        init_conv_layer(rng, c_in, c_out, 2 * stride, stride)
        for c_in, c_out, stride in zip(channels[:-1], channels[1:], strides)
    ])


def init_prosody_encoder(
    rng: np.random.Generator, speaker_dim: int, feature_dim: int
) -> ProsodyEncoderWeights:
    return ProsodyEncoderWeights(
        cln=CLNParams(
            w_gamma=he_uniform(rng, (1, speaker_dim), speaker_dim) * 0.1,
            w_beta=he_uniform(rng, (1, speaker_dim), speaker_dim) * 0.1,
        ),
        projection=he_uniform(rng, (2, feature_dim), 2),
        bias=np.zeros(feature_dim),
    )


def init_speaker_embedding(rng: np.random.Generator, dim: int) -> SpeakerEmbedding:
    """Unit-norm Gaussian vector"""
    values = rng.standard_normal(dim)
    return SpeakerEmbedding(values=values / np.linalg.norm(values))


def encoder_to_tensors(prefix: str, weights: EncoderWeights) -> Dict[str, np.ndarray]:
    """Flat TSR1 entries: <prefix>.<i>.{kernel,bias,ln_scale,ln_shift,stride}"""
    tensors: Dict[str, np.ndarray] = {}
    for index, layer in enumerate(weights.layers):
        key = f"{prefix}.{index}"
        tensors[f"{key}.kernel"] = layer.kernel
        tensors[f"{key}.bias"] = layer.bias
        tensors[f"{key}.ln_scale"] = layer.ln_scale
        tensors[f"{key}.ln_shift"] = layer.ln_shift
        tensors[f"{key}.stride"] = np.array(float(layer.stride))
    return tensors


def encoder_from_tensors(prefix: str, tensors: Mapping[str, np.ndarray]) -> EncoderWeights:
    """
    Rebuild an encoder from TSR1 entries written by encoder_to_tensors

    Raises:
        AudioFormatError: If a layer is incomplete or inconsistent
    """
    layers = []
    index = 0
    while f"{prefix}.{index}.kernel" in tensors:
        key = f"{prefix}.{index}"
        try:
            layers.append(ConvLayerWeights(
                kernel=tensors[f"{key}.kernel"],
                bias=tensors[f"{key}.bias"],
                ln_scale=tensors[f"{key}.ln_scale"],
                ln_shift=tensors[f"{key}.ln_shift"],
                stride=int(tensors.get(f"{key}.stride", np.array(1.0))),
            ))
        except (KeyError, ValueError) as e:
            raise AudioFormatError(f"encoder '{prefix}' layer {index} is invalid: {e}") from e
        index += 1
    if not layers:
        raise AudioFormatError(f"no layers for encoder '{prefix}'")
    try:
        return EncoderWeights(layers=layers)
    except ValueError as e:
        raise AudioFormatError(f"encoder '{prefix}' is inconsistent: {e}") from e


def prosody_to_tensors(prefix: str, weights: ProsodyEncoderWeights) -> Dict[str, np.ndarray]:
    return {
        f"{prefix}.w_gamma": weights.cln.w_gamma,
        f"{prefix}.w_beta": weights.cln.w_beta,
        f"{prefix}.projection": weights.projection,
        f"{prefix}.bias": weights.bias,
    }


def prosody_from_tensors(prefix: str, tensors: Mapping[str, np.ndarray]) -> ProsodyEncoderWeights:
    try:
        return ProsodyEncoderWeights(
            cln=CLNParams(w_gamma=tensors[f"{prefix}.w_gamma"], w_beta=tensors[f"{prefix}.w_beta"]),
            projection=tensors[f"{prefix}.projection"],
            bias=tensors[f"{prefix}.bias"],
        )
    except (KeyError, ValueError) as e:
        raise AudioFormatError(f"prosody encoder weights '{prefix}' are invalid: {e}") from e
