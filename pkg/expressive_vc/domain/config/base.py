from pydantic import BaseModel, ConfigDict, Field, model_validator

from expressive_vc.domain.losses import DiscriminatorSet

from .audio import AudioConfig
from .encoders import EncoderConfig, FusionConfig, ProsodyConfig
from .perturbation import PerturbationRanges
from .runtime import RuntimeConfig
from .training import TrainingConfig
from .weights import WeightPaths


class PipelineConfig(BaseModel):
    """Top level configuration for every pipeline command"""
    model_config = ConfigDict(extra="forbid")

    audio: AudioConfig = Field(default_factory=AudioConfig)
    perturbation: PerturbationRanges = Field(default_factory=PerturbationRanges)
    encoders: EncoderConfig = Field(default_factory=EncoderConfig)
    prosody: ProsodyConfig = Field(default_factory=ProsodyConfig)
    fusion: FusionConfig = Field(default_factory=FusionConfig)
    discriminators: DiscriminatorSet = Field(default_factory=DiscriminatorSet)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    weights: WeightPaths = Field(default_factory=WeightPaths)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)

    @model_validator(mode="after")
    def _consistent(self) -> "PipelineConfig":
        self.encoders.check_channel_counts()
        hop = self.audio.hop_samples
        if self.encoders.decoder_hop != hop:
            raise ValueError(
                f"decoder strides multiply to {self.encoders.decoder_hop}, "
                f"but the frame hop is {hop} samples"
            )
        if not self.prosody.f_min < self.prosody.f_max < self.audio.sample_rate / 2:
            raise ValueError("need f_min < f_max < sample_rate / 2")
        return self
