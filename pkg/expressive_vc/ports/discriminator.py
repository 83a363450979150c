from typing import Dict, List, Protocol, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor


class DiscriminatorPort(Protocol):
    """Base protocol for all waveform discriminators"""
    name: str

    def forward(self, y: Tensor) -> Tuple[Tensor, List[Tensor]]:
        """
        Score a waveform

        Args:
            y: 1-D waveform tensor

        Returns:
            Score map (any shape; every element is a real/fake logit) and the
            hidden activations used for feature matching, shallowest first

        Raises:
            ShapeError: If the waveform is too short for this discriminator
        """
        ...

    def parameters(self) -> List[Tensor]:
        """Trainable tensors, in a stable order"""
        ...

    def state(self) -> Dict[str, np.ndarray]:
        """Named weight arrays for serialization"""
        ...

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        """
        Replace the weights from named arrays

        Raises:
            ShapeError: If an array does not match the current layout
        """
        ...
