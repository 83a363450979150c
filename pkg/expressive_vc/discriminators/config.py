from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field


class DiscriminatorConfig(BaseModel):
    """Convolution stack shared by every discriminator"""
    model_config = ConfigDict(frozen=True)

    name: str = Field(description="Discriminator identifier, also the weight name prefix")
    channels: Tuple[int, int] = Field(
        default=(8, 16), description="Channels of the two hidden conv layers"
    )
    kernel_size: int = Field(default=5, ge=1)
    stride: int = Field(default=3, ge=1)
    slope: float = Field(default=0.1, ge=0.0, description="Leaky ReLU negative slope")
