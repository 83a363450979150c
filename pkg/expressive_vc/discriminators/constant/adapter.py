from typing import Dict, List, Optional, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.ports.discriminator import DiscriminatorPort

from .config import ConstantConfig


@ComponentRegistry.register(ComponentType.DISCRIMINATOR, "constant")
class ConstantDiscriminator(DiscriminatorPort):
    """Constant scorer with no features and no parameters

    Useful as an oracle: with score 1 the generator adversarial term is
    exactly zero whatever the input.
    """

    def __init__(self, config: Optional[ConstantConfig] = None, rng: Optional[np.random.Generator] = None):
        config = config or ConstantConfig()
        self.name = config.name
        self.score = config.score
        self.shape = config.shape
        self.calls = 0
        self.logger = get_logger("discriminators.constant")
        self.logger.debug(f"Initialized {self.name} with constant score {self.score}")

    def forward(self, y: Tensor) -> Tuple[Tensor, List[Tensor]]:
        self.calls += 1
        return Tensor(np.full(self.shape, self.score)), []

    def parameters(self) -> List[Tensor]:
        return []

    def state(self) -> Dict[str, np.ndarray]:
        return {}

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        pass
