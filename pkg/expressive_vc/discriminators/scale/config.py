from pydantic import Field

from expressive_vc.discriminators.config import DiscriminatorConfig


class ScaleConfig(DiscriminatorConfig):
    factor: int = Field(ge=1, description="Average-pooling factor applied before the stack")
