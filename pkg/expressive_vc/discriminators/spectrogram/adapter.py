from typing import Dict, List, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor, stft_magnitude
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.discriminators.base import ConvStack
from expressive_vc.ports.discriminator import DiscriminatorPort

from .config import SpectrogramConfig


@ComponentRegistry.register(ComponentType.DISCRIMINATOR, "spectrogram")
class SpectrogramDiscriminator(DiscriminatorPort):
    """Scores the log-magnitude STFT, frequency bins as input channels"""

    def __init__(self, config: SpectrogramConfig, rng: np.random.Generator):
        self.name = config.name
        self.resolution = config.resolution
        self.floor = config.floor
        bins = config.resolution[0] // 2 + 1
        self.stack = ConvStack(config, in_channels=bins, rng=rng)
        self.logger = get_logger("discriminators.spectrogram")
        self.logger.debug(f"Initialized {self.name} at resolution {self.resolution}")

    def forward(self, y: Tensor) -> Tuple[Tensor, List[Tensor]]:
        if y.ndim != 1 or y.shape[0] == 0:
            raise ShapeError(f"{self.name} expects a non-empty 1-D waveform, got {y.shape}")
        n_fft, hop, win = self.resolution
        magnitude = stft_magnitude(y, n_fft, hop, win)
        return self.stack((magnitude + self.floor).log().T)

    def parameters(self) -> List[Tensor]:
        return self.stack.parameters()

    def state(self) -> Dict[str, np.ndarray]:
        return self.stack.state()

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        self.stack.load_state(state)
