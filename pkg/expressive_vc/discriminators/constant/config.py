from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field


class ConstantConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="constant")
    score: float = Field(default=1.0, description="Value of every score element")
    shape: Tuple[int, ...] = Field(default=(1,), description="Shape of the score map")
