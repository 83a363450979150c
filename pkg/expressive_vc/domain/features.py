from typing import Any, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class BnfMatrix(BaseModel):
    """Bottleneck features produced by an external ASR model"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(description="T_bnf x D_bnf matrix")
    source_hop_ms: int = Field(default=10, ge=0, description="Hop of the producing ASR")

    @field_validator("values", mode="before")
    @classmethod
    def _finite_matrix(cls, value: Any) -> np.ndarray:
        values = np.array(value, dtype=np.float32)
        if values.ndim != 2:
            raise ValueError(f"BNF values must be a matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("BNF values must be finite")
        return values

    @property
    def num_frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


class ConvLayerWeights(BaseModel):
    """One convolution block: conv1d kernel and bias, then layer-norm scale and shift"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kernel: np.ndarray = Field(description="(C_out, C_in, K)")
    bias: np.ndarray = Field(description="(C_out,)")
    ln_scale: np.ndarray = Field(description="(C_out,)")
    ln_shift: np.ndarray = Field(description="(C_out,)")
    stride: int = Field(default=1, ge=1)

    @field_validator("kernel", "bias", "ln_scale", "ln_shift", mode="before")
    @classmethod
    def _finite(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if not np.all(np.isfinite(array)):
            raise ValueError("encoder weights must be finite")
        return array

    @model_validator(mode="after")
    def _shapes(self) -> "ConvLayerWeights":
        if self.kernel.ndim != 3:
            raise ValueError(f"kernel must be (C_out, C_in, K), got {self.kernel.shape}")
        c_out = self.kernel.shape[0]
        for name in ("bias", "ln_scale", "ln_shift"):
            if getattr(self, name).shape != (c_out,):
                raise ValueError(
                    f"{name} shape {getattr(self, name).shape} does not match C_out={c_out}"
                )
        return self

    @property
    def in_channels(self) -> int:
        return int(self.kernel.shape[1])

    @property
    def out_channels(self) -> int:
        return int(self.kernel.shape[0])

    @property
    def kernel_size(self) -> int:
        return int(self.kernel.shape[2])


class EncoderWeights(BaseModel):
    """Ordered convolution blocks of a content encoder"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    layers: List[ConvLayerWeights]

    @model_validator(mode="after")
    def _chained(self) -> "EncoderWeights":
        for index in range(1, len(self.layers)):
            previous, current = self.layers[index - 1], self.layers[index]
            if current.in_channels != previous.out_channels:
                raise ValueError(
                    f"layer {index} expects {current.in_channels} input channels, "
                    f"layer {index - 1} produces {previous.out_channels}"
                )
        return self

    @property
    def in_channels(self) -> Optional[int]:
        return self.layers[0].in_channels if self.layers else None

    @property
    def out_channels(self) -> Optional[int]:
        return self.layers[-1].out_channels if self.layers else None
