from pydantic import Field, field_validator

from expressive_vc.discriminators.config import DiscriminatorConfig
from expressive_vc.domain.losses import StftResolution, validate_resolutions


class SpectrogramConfig(DiscriminatorConfig):
    resolution: StftResolution = Field(description="(fft size, hop, window length)")
    floor: float = Field(default=1e-5, gt=0.0, description="Magnitude floor inside the log")

    @field_validator("resolution")
    @classmethod
    def _valid_resolution(cls, resolution: StftResolution) -> StftResolution:
        return validate_resolutions([resolution])[0]
