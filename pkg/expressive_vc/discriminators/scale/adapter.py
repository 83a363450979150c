from typing import Dict, List, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor, avg_pool1d
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.discriminators.base import ConvStack
from expressive_vc.ports.discriminator import DiscriminatorPort

from .config import ScaleConfig


@ComponentRegistry.register(ComponentType.DISCRIMINATOR, "scale")
class ScaleDiscriminator(DiscriminatorPort):
    """Scores the waveform after average pooling by a fixed factor"""

    def __init__(self, config: ScaleConfig, rng: np.random.Generator):
        self.name = config.name
        self.factor = config.factor
        self.stack = ConvStack(config, in_channels=1, rng=rng)
        self.logger = get_logger("discriminators.scale")
        self.logger.debug(f"Initialized {self.name} with pooling factor {self.factor}")

    def forward(self, y: Tensor) -> Tuple[Tensor, List[Tensor]]:
        if y.ndim != 1 or y.shape[0] < self.factor:
            raise ShapeError(
                f"{self.name} needs a 1-D waveform of at least {self.factor} samples, got {y.shape}"
            )
        pooled = avg_pool1d(y, self.factor)
        return self.stack(pooled.reshape(1, pooled.shape[0]))

    def parameters(self) -> List[Tensor]:
        return self.stack.parameters()

    def state(self) -> Dict[str, np.ndarray]:
        return self.stack.state()

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        self.stack.load_state(state)
