"""Discriminator registration.

Importing the adapters runs their registration decorators, so anything that
looks discriminators up by name must import this package first.
"""

from expressive_vc.common.registry import ComponentRegistry, ComponentType

from expressive_vc.discriminators.period.adapter import PeriodDiscriminator
from expressive_vc.discriminators.scale.adapter import ScaleDiscriminator
from expressive_vc.discriminators.spectrogram.adapter import SpectrogramDiscriminator
from expressive_vc.discriminators.constant.adapter import ConstantDiscriminator
from expressive_vc.discriminators.bank import DiscriminatorBank

__all__ = [
    'ComponentRegistry',
    'ComponentType',
    'PeriodDiscriminator',
    'ScaleDiscriminator',
    'SpectrogramDiscriminator',
    'ConstantDiscriminator',
    'DiscriminatorBank'
]

from expressive_vc.common.logging import get_logger
logger = get_logger("discriminators")
logger.debug(f"Registered discriminators: {ComponentRegistry.names(ComponentType.DISCRIMINATOR)}")
