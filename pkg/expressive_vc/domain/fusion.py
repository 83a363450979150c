from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FusionOutput(BaseModel):
    """Fused feature H_f and the per-frame attention weights (w_b, w_w)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h_f: np.ndarray = Field(description="T x F fused feature")
    weights: np.ndarray = Field(description="T x 2 matrix, columns (w_b, w_w)")

    @field_validator("h_f", "weights", mode="before")
    @classmethod
    def _matrix(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError(f"expected a matrix, got shape {array.shape}")
        return array

    @model_validator(mode="after")
    def _aligned(self) -> "FusionOutput":
        if self.weights.shape != (self.h_f.shape[0], 2):
            raise ValueError(
                f"weights shape {self.weights.shape} does not match T={self.h_f.shape[0]}"
            )
        return self

    @property
    def num_frames(self) -> int:
        return int(self.h_f.shape[0])

    @property
    def w_b(self) -> np.ndarray:
        """Proportion of H_b in the fused feature, per frame"""
        return self.weights[:, 0]

    @property
    def w_w(self) -> np.ndarray:
        return self.weights[:, 1]
