from .base import PipelineConfig
from .runtime import RuntimeConfig, LoggingComponentConfig
from .audio import AudioConfig
from .perturbation import PerturbationRanges
from .encoders import EncoderConfig, ProsodyConfig, FusionConfig
from .training import TrainingConfig, LossWeights
from .weights import WeightPaths

__all__ = [
    'PipelineConfig',
    'RuntimeConfig',
    'LoggingComponentConfig',
    'AudioConfig',
    'PerturbationRanges',
    'EncoderConfig',
    'ProsodyConfig',
    'FusionConfig',
    'TrainingConfig',
    'LossWeights',
    'WeightPaths'
]
