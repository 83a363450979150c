from pydantic import Field

from expressive_vc.discriminators.config import DiscriminatorConfig


class PeriodConfig(DiscriminatorConfig):
    period: int = Field(ge=1, description="Samples folded into each row of the 2-D view")
