from .decoder import ToyDecoder, toy_decode
from .losses import (
    stft_loss, feature_matching_loss, adversarial_losses, compute_losses, total_losses
)
from .model import GeneratorModel, GeneratorOutput
from .trainer import SmokeTrainer, smoke_train, write_loss_history

__all__ = [
    'ToyDecoder',
    'toy_decode',
    'stft_loss',
    'feature_matching_loss',
    'adversarial_losses',
    'compute_losses',
    'total_losses',
    'GeneratorModel',
    'GeneratorOutput',
    'SmokeTrainer',
    'smoke_train',
    'write_loss_history'
]
