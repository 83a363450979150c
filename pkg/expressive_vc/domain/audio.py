import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FrameConfig(BaseModel):
    """Analysis frame grid shared by every per-frame feature"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    frame_len_ms: float = Field(default=50.0, gt=0, description="Frame length in milliseconds")
    hop_ms: float = Field(default=10.0, gt=0, description="Hop size in milliseconds")
    window: str = Field(default="hann", description="Named window function (scipy.signal.get_window)")

    @model_validator(mode="after")
    def _hop_within_frame(self) -> "FrameConfig":
        if self.hop_ms > self.frame_len_ms:
            raise ValueError(
                f"hop_ms ({self.hop_ms}) must not exceed frame_len_ms ({self.frame_len_ms})"
            )
        return self

    def frame_length(self, sample_rate: int) -> int:
        """Frame length in samples"""
        return int(round(sample_rate * self.frame_len_ms / 1000.0))

    def hop_length(self, sample_rate: int) -> int:
        """Hop size in samples"""
        return int(round(sample_rate * self.hop_ms / 1000.0))

    def num_frames(self, num_samples: int, sample_rate: int) -> int:
        """Frame count T = ceil(len / hop) of the shared grid"""
        return int(math.ceil(num_samples / self.hop_length(sample_rate)))


class AudioBuffer(BaseModel):
    """Mono PCM samples with their sample rate"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    samples: np.ndarray = Field(description="Real amplitudes, nominally in [-1, 1]")
    sample_rate: int = Field(gt=0, description="Sample rate in Hz")

    @field_validator("samples", mode="before")
    @classmethod
    def _as_finite_vector(cls, value: Any) -> np.ndarray:
        samples = np.array(value, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be one-dimensional, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        return samples

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration(self) -> float:
        """Duration in seconds"""
        return len(self) / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> "AudioBuffer":
        """A buffer at the same rate holding new samples"""
        return AudioBuffer(samples=samples, sample_rate=self.sample_rate)
