"""Three-layer strided convolution stack behind every discriminator."""
from typing import Dict, List, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor, conv1d
from expressive_vc.common.errors import ShapeError
from expressive_vc.features.weights import he_uniform

from .config import DiscriminatorConfig

# The score layer keeps full resolution
SCORE_KERNEL = 3


class ConvStack:
    """conv(stride) -> leaky -> conv(stride) -> leaky -> conv -> score

    Inputs are (C, T) or (B, C, T). The two hidden activations are returned
    as feature-matching features.
    """

    def __init__(self, config: DiscriminatorConfig, in_channels: int, rng: np.random.Generator):
        self.config = config
        hidden = list(config.channels)
        widths = [in_channels] + hidden + [1]
        kernels = [config.kernel_size, config.kernel_size, SCORE_KERNEL]
        self.strides = [config.stride, config.stride, 1]
        self.kernels: List[Tensor] = []
        self.biases: List[Tensor] = []
        for c_in, c_out, k in zip(widths[:-1], widths[1:], kernels):
            self.kernels.append(Tensor(he_uniform(rng, (c_out, c_in, k), c_in * k), requires_grad=True))
            self.biases.append(Tensor(np.zeros(c_out), requires_grad=True))

    def __call__(self, x: Tensor) -> Tuple[Tensor, List[Tensor]]:
        features: List[Tensor] = []
        h = x
        last = len(self.kernels) - 1
        for index, (kernel, bias, stride) in enumerate(zip(self.kernels, self.biases, self.strides)):
            k = kernel.shape[2]
            h = conv1d(h, kernel, bias, stride=stride, padding=(k // 2, k // 2))
            if index < last:
                h = h.leaky_relu(self.config.slope)
                features.append(h)
        return h, features

    def parameters(self) -> List[Tensor]:
        return [t for pair in zip(self.kernels, self.biases) for t in pair]

    def state(self) -> Dict[str, np.ndarray]:
        prefix = self.config.name
        state: Dict[str, np.ndarray] = {}
        for index, (kernel, bias) in enumerate(zip(self.kernels, self.biases)):
            state[f"{prefix}.{index}.kernel"] = kernel.data.copy()
            state[f"{prefix}.{index}.bias"] = bias.data.copy()
        return state

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        for key, tensor in zip(self.state().keys(), self.parameters()):
            if key not in state:
                raise ShapeError(f"missing discriminator weight {key}")
            value = np.asarray(state[key], dtype=np.float64)
            if value.shape != tensor.shape:
                raise ShapeError(f"{key}: expected {tensor.shape}, got {value.shape}")
            tensor.data = value.copy()
