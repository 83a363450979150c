"""The full discriminator family built from a DiscriminatorSet."""
from typing import Dict, List, Sequence, Tuple

import numpy as np

from expressive_vc.autodiff import Tensor
from expressive_vc.common.errors import ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.common.seeding import make_rng
from expressive_vc.domain.losses import DiscriminatorSet
from expressive_vc.ports.discriminator import DiscriminatorPort

from .period.config import PeriodConfig
from .scale.config import ScaleConfig
from .spectrogram.config import SpectrogramConfig

logger = get_logger("discriminators.bank")

# (scores, features) for every member, in bank order
BankOutput = Tuple[List[Tensor], List[List[Tensor]]]


class DiscriminatorBank:
    """Ordered collection of discriminators scored together"""

    def __init__(self, members: Sequence[DiscriminatorPort]):
        if not members:
            raise ShapeError("a discriminator bank needs at least one member")
        names = [member.name for member in members]
        if len(set(names)) != len(names):
            raise ShapeError(f"discriminator names must be unique, got {names}")
        self.members = list(members)

    @classmethod
    def from_set(cls, spec: DiscriminatorSet, seed: int) -> "DiscriminatorBank":
        """Period, scale and spectrogram members, each seeded from its own name"""
        shared = dict(channels=spec.channels, kernel_size=spec.kernel_size, stride=spec.stride)
        configs: List[Tuple[str, object]] = []
        for period in spec.periods:
            configs.append(("period", PeriodConfig(name=f"mpd.{period}", period=period, **shared)))
        for factor in spec.scales:
            configs.append(("scale", ScaleConfig(name=f"msd.{factor}", factor=factor, **shared)))
        for resolution in spec.stft_resolutions:
            name = f"mrd.{resolution[0]}"
            configs.append(("spectrogram", SpectrogramConfig(name=name, resolution=resolution, **shared)))

        members = [
            ComponentRegistry.create(
                ComponentType.DISCRIMINATOR, kind, config=config, rng=make_rng(seed, config.name)
            )
            for kind, config in configs
        ]
        logger.info(
            f"Built {len(members)} discriminators: {len(spec.periods)} period, "
            f"{len(spec.scales)} scale, {len(spec.stft_resolutions)} spectrogram"
        )
        return cls(members)

    def __len__(self) -> int:
        return len(self.members)

    def __call__(self, y: Tensor) -> BankOutput:
        scores: List[Tensor] = []
        features: List[List[Tensor]] = []
        for member in self.members:
            score, hidden = member.forward(y)
            scores.append(score)
            features.append(hidden)
        return scores, features

    def parameters(self) -> List[Tensor]:
        return [p for member in self.members for p in member.parameters()]

    def state(self) -> Dict[str, np.ndarray]:
        state: Dict[str, np.ndarray] = {}
        for member in self.members:
            state.update(member.state())
        return state

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        for member in self.members:
            member.load_state(state)
