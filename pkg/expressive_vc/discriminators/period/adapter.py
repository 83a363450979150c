from typing import Dict, List, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor, pad
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.discriminators.base import ConvStack
from expressive_vc.ports.discriminator import DiscriminatorPort

from .config import PeriodConfig


@ComponentRegistry.register(ComponentType.DISCRIMINATOR, "period")
class PeriodDiscriminator(DiscriminatorPort):
    """Scores the signal folded into p interleaved subsequences

    Sample n lands in row n mod p, so each row sees every p-th sample and
    periodic structure at that spacing lines up along the convolved axis.
    """

    def __init__(self, config: PeriodConfig, rng: np.random.Generator):
        self.name = config.name
        self.period = config.period
        self.stack = ConvStack(config, in_channels=1, rng=rng)
        self.logger = get_logger("discriminators.period")
        self.logger.debug(f"Initialized {self.name} with period {self.period}")

    def fold(self, y: Tensor) -> Tensor:
        """(N,) -> (p, 1, ceil(N / p)), zero padding the tail"""
        if y.ndim != 1 or y.shape[0] == 0:
            raise ShapeError(f"{self.name} expects a non-empty 1-D waveform, got {y.shape}")
        p = self.period
        remainder = y.shape[0] % p
        if remainder:
            y = pad(y, 0, p - remainder)
        rows = y.shape[0] // p
        return y.reshape(rows, p).T.reshape(p, 1, rows)

    def forward(self, y: Tensor) -> Tuple[Tensor, List[Tensor]]:
        return self.stack(self.fold(y))

    def parameters(self) -> List[Tensor]:
        return self.stack.parameters()

    def state(self) -> Dict[str, np.ndarray]:
        return self.stack.state()

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        self.stack.load_state(state)
