from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .audio import FrameConfig


def _finite_array(value: Any, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} must be finite")
    return array


class ProsodyTrack(BaseModel):
    """Per-frame f0 (Hz, 0 = unvoiced) and RMS energy on the shared frame grid"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    f0: np.ndarray
    energy: np.ndarray
    frame_config: FrameConfig = Field(default_factory=FrameConfig)

    @field_validator("f0", "energy", mode="before")
    @classmethod
    def _non_negative(cls, value: Any) -> np.ndarray:
        array = _finite_array(value, 1, "track")
        if np.any(array < 0):
            raise ValueError("f0 and energy must be non-negative")
        return array

    @model_validator(mode="after")
    def _same_length(self) -> "ProsodyTrack":
        if self.f0.shape != self.energy.shape:
            raise ValueError(
                f"f0 ({self.f0.shape[0]}) and energy ({self.energy.shape[0]}) lengths differ"
            )
        return self

    def __len__(self) -> int:
        return int(self.f0.shape[0])

    @property
    def voiced(self) -> np.ndarray:
        """Boolean voicing mask"""
        return self.f0 > 0


class SpeakerEmbedding(BaseModel):
    """Target speaker vector used as conditioning"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _vector(cls, value: Any) -> np.ndarray:
        return _finite_array(value, 1, "speaker embedding")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


class CLNParams(BaseModel):
    """Affine maps from a speaker embedding to per-channel scale and bias

    gamma = W_gamma @ spk + 1, beta = W_beta @ spk; both matrices are (C, D_spk).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    w_gamma: np.ndarray
    w_beta: np.ndarray

    @field_validator("w_gamma", "w_beta", mode="before")
    @classmethod
    def _matrix(cls, value: Any) -> np.ndarray:
        return _finite_array(value, 2, "CLN weight")

    @model_validator(mode="after")
    def _same_shape(self) -> "CLNParams":
        if self.w_gamma.shape != self.w_beta.shape:
            raise ValueError(
                f"W_gamma {self.w_gamma.shape} and W_beta {self.w_beta.shape} shapes differ"
            )
        return self

    @property
    def channels(self) -> int:
        return int(self.w_gamma.shape[0])

    @property
    def speaker_dim(self) -> int:
        return int(self.w_gamma.shape[1])

    @classmethod
    def zeros(cls, channels: int, speaker_dim: int) -> "CLNParams":
        """Zero conditioning: gamma = 1, beta = 0 for every speaker"""
        return cls(
            w_gamma=np.zeros((channels, speaker_dim)),
            w_beta=np.zeros((channels, speaker_dim)),
        )


class ProsodyEncoderWeights(BaseModel):
    """CLN parameters for the f0 channel and the 2 -> F output projection"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cln: CLNParams
    projection: np.ndarray = Field(description="(2, F): rows map normalized f0 and energy")
    bias: np.ndarray = Field(description="(F,)")

    @field_validator("projection", mode="before")
    @classmethod
    def _projection_matrix(cls, value: Any) -> np.ndarray:
        return _finite_array(value, 2, "prosody projection")

    @field_validator("bias", mode="before")
    @classmethod
    def _bias_vector(cls, value: Any) -> np.ndarray:
        return _finite_array(value, 1, "prosody bias")

    @model_validator(mode="after")
    def _consistent(self) -> "ProsodyEncoderWeights":
        if self.cln.channels != 1:
            raise ValueError(f"CLN conditions the single f0 channel, got {self.cln.channels}")
        if self.projection.shape[0] != 2 or self.bias.shape != (self.projection.shape[1],):
            raise ValueError(
                f"projection {self.projection.shape} and bias {self.bias.shape} "
                "must be (2, F) and (F,)"
            )
        return self

    @property
    def feature_dim(self) -> int:
        return int(self.projection.shape[1])
