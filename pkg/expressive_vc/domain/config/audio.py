from pydantic import BaseModel, Field, model_validator

from expressive_vc.domain.audio import FrameConfig


class AudioConfig(BaseModel):
    """Working sample rate and analysis frame grid"""
    sample_rate: int = Field(default=24000, gt=0, description="Working sample rate in Hz")
    frame_len_ms: float = Field(default=50.0, gt=0, description="Analysis frame length")
    hop_ms: float = Field(default=10.0, gt=0, description="Analysis hop size")
    window: str = Field(default="hann", description="Analysis window name")

    @model_validator(mode="after")
    def _valid_grid(self) -> "AudioConfig":
        # Delegate the hop/frame invariant to FrameConfig
        self.frame
        return self

    @property
    def frame(self) -> FrameConfig:
        return FrameConfig(
            frame_len_ms=self.frame_len_ms, hop_ms=self.hop_ms, window=self.window
        )

    @property
    def hop_samples(self) -> int:
        return self.frame.hop_length(self.sample_rate)
