"""BNF and perturbed-waveform encoders.

Both encoders are stacks of conv1d -> layer norm over channels -> ReLU.
The BNF encoder keeps the frame rate ("same" padding); the waveform
encoder downsamples by the product of its strides.
"""
from typing import List, Optional, Sequence

import numpy as np

from expressive_vc.autodiff import Tensor, concat, conv1d
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.domain.audio import AudioBuffer, FrameConfig
from expressive_vc.domain.features import ConvLayerWeights, EncoderWeights

from .bnf import align_bnf

logger = get_logger("features.encoders")

LAYER_NORM_EPS = 1e-5


class ConvBlock:
    """Tensor view of one ConvLayerWeights block"""

    def __init__(self, kernel: Tensor, bias: Tensor, ln_scale: Tensor, ln_shift: Tensor, stride: int = 1):
        self.kernel = kernel
        self.bias = bias
        self.ln_scale = ln_scale
        self.ln_shift = ln_shift
        self.stride = stride

    @classmethod
    def from_weights(cls, layer: ConvLayerWeights, requires_grad: bool = False) -> "ConvBlock":
        return cls(
            Tensor(layer.kernel, requires_grad=requires_grad),
            Tensor(layer.bias, requires_grad=requires_grad),
            Tensor(layer.ln_scale, requires_grad=requires_grad),
            Tensor(layer.ln_shift, requires_grad=requires_grad),
            layer.stride,
        )

    def tensors(self) -> List[Tensor]:
        return [self.kernel, self.bias, self.ln_scale, self.ln_shift]

    def to_weights(self) -> ConvLayerWeights:
        return ConvLayerWeights(
            kernel=self.kernel.numpy(),
            bias=self.bias.numpy(),
            ln_scale=self.ln_scale.numpy(),
            ln_shift=self.ln_shift.numpy(),
            stride=self.stride,
        )

    def padding(self, same: bool) -> tuple[int, int]:
        size = self.kernel.shape[2]
        total = size - 1 if same else max(0, size - self.stride)
        return total // 2, total - total // 2

    def __call__(self, h: Tensor, same: bool = False) -> Tensor:
        """(C_in, L) -> (C_out, L')"""
        out = conv1d(h, self.kernel, self.bias, stride=self.stride, padding=self.padding(same))
        normed = out.layer_norm(axis=0, eps=LAYER_NORM_EPS)
        return (normed * self.ln_scale.reshape(-1, 1) + self.ln_shift.reshape(-1, 1)).relu()


def blocks_of(weights: EncoderWeights, requires_grad: bool = False) -> List[ConvBlock]:
    return [ConvBlock.from_weights(layer, requires_grad) for layer in weights.layers]


def bnf_forward(bnf: Tensor, blocks: Sequence[ConvBlock]) -> Tensor:
    """H_b (T x F) from aligned BNFs (T x D)"""
    if bnf.ndim != 2:
        raise ShapeError(f"expected a (T, D) BNF matrix, got {bnf.shape}")
    if blocks and blocks[0].kernel.shape[1] != bnf.shape[1]:
        raise ShapeError(
            f"BNF encoder expects {blocks[0].kernel.shape[1]} channels, got {bnf.shape[1]}"
        )
    h = bnf.T
    for block in blocks:
        h = block(h, same=True)
    return h.T


def interpolation_matrix(source: int, target: int) -> np.ndarray:
    """(target, source) matrix of the linear interpolation used by align_bnf"""
    return align_bnf(np.eye(source), target)


def fit_frames(h: Tensor, frames: int) -> Tensor:
    """Trim or edge-pad a (T', F) matrix within one frame of ``frames``, else interpolate"""
    current = h.shape[0]
    if current == frames:
        return h
    if current - 1 == frames:
        return h[:frames]
    if current + 1 == frames:
        return concat([h, h[current - 1:current]], axis=0)
    logger.warning(
        f"Waveform encoder emitted {current} frames for a {frames}-frame grid; interpolating"
    )
    return Tensor(interpolation_matrix(current, frames)) @ h


def pwav_forward(samples: Tensor, blocks: Sequence[ConvBlock], frames: int) -> Tensor:
    """H_w (T x F) from a waveform of N samples"""
    if samples.ndim != 1:
        raise ShapeError(f"expected a 1-D waveform, got {samples.shape}")
    if blocks and blocks[0].kernel.shape[1] != 1:
        raise ShapeError(f"waveform encoder must take 1 channel, got {blocks[0].kernel.shape[1]}")
    h = samples.reshape(1, samples.shape[0])
    for block in blocks:
        h = block(h)
    return fit_frames(h.T, frames)


def bnf_encode(bnf_aligned: np.ndarray, weights: EncoderWeights) -> np.ndarray:
    """
    Two conv -> layer norm -> ReLU blocks over BNFs already on the frame grid

    Raises:
        ShapeError: If D_bnf does not match the first layer
    """
    return bnf_forward(Tensor(bnf_aligned), blocks_of(weights)).numpy()


def pwav_encode(
    audio: AudioBuffer,
    weights: EncoderWeights,
    frames: Optional[int] = None,
    frame_config: Optional[FrameConfig] = None,
) -> np.ndarray:
    """
    Strided conv -> layer norm -> ReLU blocks over the perturbed waveform

    The output is brought onto ``frames`` rows; by default the frame count
    of the shared grid for this audio.
    """
    if frames is None:
        frames = (frame_config or FrameConfig()).num_frames(len(audio), audio.sample_rate)
    return pwav_forward(Tensor(audio.samples), blocks_of(weights), frames).numpy()
