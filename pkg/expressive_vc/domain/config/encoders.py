import math
from typing import Literal, Tuple

from pydantic import BaseModel, Field, field_validator


class EncoderConfig(BaseModel):
    """Dimensions and strides of the content encoders and the toy decoder"""
    bnf_dim: int = Field(default=256, gt=0, description="D_bnf of the ingested BNFs")
    feature_dim: int = Field(default=192, gt=0, description="F, the shared feature width")
    speaker_dim: int = Field(default=256, gt=0, description="D_spk of speaker embeddings")
    bnf_kernel_size: int = Field(default=5, ge=1)
    bnf_layers: int = Field(default=2, ge=1)
    pwav_strides: Tuple[int, ...] = Field(default=(6, 5, 4, 2))
    pwav_channels: Tuple[int, ...] = Field(
        default=(64, 128, 192), description="Hidden channels; the last layer emits feature_dim"
    )
    decoder_strides: Tuple[int, ...] = Field(default=(2, 4, 5, 6))
    decoder_channels: Tuple[int, ...] = Field(
        default=(128, 64, 32), description="Hidden channels; the last layer emits one channel"
    )

    @field_validator("pwav_strides", "decoder_strides")
    @classmethod
    def _positive(cls, strides: Tuple[int, ...]) -> Tuple[int, ...]:
        if not strides or any(s < 1 for s in strides):
            raise ValueError(f"strides must be positive, got {strides}")
        return strides

    @property
    def pwav_hop(self) -> int:
        return math.prod(self.pwav_strides)

    @property
    def decoder_hop(self) -> int:
        return math.prod(self.decoder_strides)

    def check_channel_counts(self) -> None:
        if len(self.pwav_channels) != len(self.pwav_strides) - 1:
            raise ValueError(
                f"{len(self.pwav_strides)} pwav strides need "
                f"{len(self.pwav_strides) - 1} hidden channel counts"
            )
        if len(self.decoder_channels) != len(self.decoder_strides) - 1:
            raise ValueError(
                f"{len(self.decoder_strides)} decoder strides need "
                f"{len(self.decoder_strides) - 1} hidden channel counts"
            )


class ProsodyConfig(BaseModel):
    """Pitch tracking and prosody-encoder settings"""
    f_min: float = Field(default=50.0, gt=0)
    f_max: float = Field(default=600.0, gt=0)
    yin_threshold: float = Field(default=0.15, gt=0, lt=1)
    silence_rms: float = Field(
        default=1e-4, ge=0, description="Frames quieter than this are unvoiced"
    )
    activation: Literal["tanh", "identity"] = Field(default="tanh")


class FusionConfig(BaseModel):
    """Fusion of H_b and H_w"""
    mode: Literal["attention", "concat"] = Field(
        default="attention",
        description="attention: prosody-queried softmax; concat: linear map of concat(H_b, H_w)"
    )
