"""Transposed-convolution decoder standing in for the HiFi-GAN generator.

The prosody feature is projected and added to the content feature, then a
stack of transposed convolutions upsamples the frame rate by the product of
the strides. Each layer has kernel 2s and is cropped to exactly s outputs per
input step.
"""
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from expressive_vc.autodiff import Tensor, conv_transpose1d, linear
from expressive_vc.common.errors import AudioFormatError, ShapeError
from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.domain.config import AudioConfig
from expressive_vc.features.weights import he_uniform

DEFAULT_SAMPLE_RATE = AudioConfig().sample_rate


class ToyDecoder:
    """(T x F) content + (T x F) prosody -> T * prod(strides) samples"""

    def __init__(
        self,
        prosody_projection: Tensor,
        prosody_bias: Tensor,
        kernels: Sequence[Tensor],
        biases: Sequence[Tensor],
        strides: Sequence[int],
        slope: float = 0.1,
    ):
        if not len(kernels) == len(biases) == len(strides):
            raise ShapeError("decoder needs one kernel, bias and stride per layer")
        self.prosody_projection = prosody_projection
        self.prosody_bias = prosody_bias
        self.kernels = list(kernels)
        self.biases = list(biases)
        self.strides = [int(s) for s in strides]
        self.slope = slope

    @classmethod
    def init(
        cls,
        rng: np.random.Generator,
        feature_dim: int,
        strides: Sequence[int],
        hidden_channels: Sequence[int],
    ) -> "ToyDecoder":
        channels = [feature_dim] + list(hidden_channels) + [1]
        if len(channels) - 1 != len(strides):
            raise ShapeError(f"{len(strides)} strides need {len(strides) - 1} hidden channel counts")
        kernels = [
            Tensor(he_uniform(rng, (c_out, c_in, 2 * s), c_in * 2 * s), requires_grad=True)
            for c_in, c_out, s in zip(channels[:-1], channels[1:], strides)
        ]
        biases = [Tensor(np.zeros(c), requires_grad=True) for c in channels[1:]]
        return cls(
            Tensor(he_uniform(rng, (feature_dim, feature_dim), feature_dim) * 0.1, requires_grad=True),
            Tensor(np.zeros(feature_dim), requires_grad=True),
            kernels,
            biases,
            strides,
        )

    @property
    def hop(self) -> int:
        return int(np.prod(self.strides))

    def __call__(self, h: Tensor, h_p: Tensor) -> Tensor:
        if h.ndim != 2 or h.shape != h_p.shape:
            raise ShapeError(f"decoder needs equal T x F inputs, got {h.shape} and {h_p.shape}")
        x = (h + linear(h_p, self.prosody_projection, self.prosody_bias)).T
        last = len(self.kernels) - 1
        for index, (kernel, bias, stride) in enumerate(zip(self.kernels, self.biases, self.strides)):
            steps = x.shape[1]
            out = conv_transpose1d(x, kernel, bias, stride=stride)
            crop = stride // 2
            x = out[:, crop:crop + steps * stride]
            x = x.tanh() if index == last else x.leaky_relu(self.slope)
        return x.reshape(x.shape[1])

    def parameters(self) -> List[Tensor]:
        params = [self.prosody_projection, self.prosody_bias]
        for kernel, bias in zip(self.kernels, self.biases):
            params.extend([kernel, bias])
        return params

    def state(self, prefix: str = "decoder") -> Dict[str, np.ndarray]:
        state = {
            f"{prefix}.prosody_projection": self.prosody_projection.numpy(),
            f"{prefix}.prosody_bias": self.prosody_bias.numpy(),
        }
        for index, (kernel, bias, stride) in enumerate(zip(self.kernels, self.biases, self.strides)):
            state[f"{prefix}.{index}.kernel"] = kernel.numpy()
            state[f"{prefix}.{index}.bias"] = bias.numpy()
            state[f"{prefix}.{index}.stride"] = np.array(float(stride))
        return state

    @classmethod
    def from_state(cls, state: Mapping[str, np.ndarray], prefix: str = "decoder") -> "ToyDecoder":
        """
        Rebuild a decoder from entries written by state()

        Raises:
            AudioFormatError: If entries are missing
        """
        kernels, biases, strides = [], [], []
        index = 0
        try:
            while f"{prefix}.{index}.kernel" in state:
                kernels.append(Tensor(state[f"{prefix}.{index}.kernel"], requires_grad=True))
                biases.append(Tensor(state[f"{prefix}.{index}.bias"], requires_grad=True))
                strides.append(int(round(state[f"{prefix}.{index}.stride"].item())))
                index += 1
            projection = Tensor(state[f"{prefix}.prosody_projection"], requires_grad=True)
            bias = Tensor(state[f"{prefix}.prosody_bias"], requires_grad=True)
        except KeyError as e:
            raise AudioFormatError(f"decoder weights are incomplete: missing {e}") from e
        if not kernels:
            raise AudioFormatError(f"no layers for decoder '{prefix}'")
        return cls(projection, bias, kernels, biases, strides)


def toy_decode(
    h: np.ndarray,
    h_p: np.ndarray,
    decoder: ToyDecoder,
    length: Optional[int] = None,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
) -> AudioBuffer:
    """
    Waveform of T * hop samples at ``sample_rate``, optionally trimmed to ``length``

    Raises:
        ShapeError: If the features differ in shape
    """
    samples = decoder(Tensor(h), Tensor(h_p)).numpy()
    if length is not None:
        samples = samples[:length]
    return AudioBuffer(samples=samples, sample_rate=sample_rate)
