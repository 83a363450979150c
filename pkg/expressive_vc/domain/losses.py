import math
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# (fft size, hop, window length)
StftResolution = Tuple[int, int, int]

DEFAULT_STFT_RESOLUTIONS: List[StftResolution] = [
    (512, 128, 512),
    (1024, 256, 1024),
    (2048, 512, 2048),
]


def _is_prime(value: int) -> bool:
    if value < 2:
        return False
    return all(value % d for d in range(2, int(math.isqrt(value)) + 1))


def validate_resolutions(resolutions: List[StftResolution]) -> List[StftResolution]:
    """Check hop <= win <= fft for every resolution"""
    checked = []
    for resolution in resolutions:
        fft, hop, win = (int(v) for v in resolution)
        if not 0 < hop <= win <= fft:
            raise ValueError(f"invalid STFT resolution {resolution}: need 0 < hop <= win <= fft")
        if fft % 2:
            raise ValueError(f"invalid STFT resolution {resolution}: fft size must be even")
        checked.append((fft, hop, win))
    return checked


class LossBreakdown(BaseModel):
    """Loss components of one step; totals follow the two-path composition"""
    model_config = ConfigDict(frozen=True)

    adv_g: float
    adv_d: float
    fm: float
    stft: float
    total_g: float
    total_d: float

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.model_dump().values())

    def __add__(self, other: "LossBreakdown") -> "LossBreakdown":
        return LossBreakdown(**{
            key: value + getattr(other, key) for key, value in self.model_dump().items()
        })


class DiscriminatorSet(BaseModel):
    """Shape of the discriminator family used for adversarial training"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    periods: List[int] = Field(default_factory=lambda: [2, 3, 5, 7, 11])
    scales: List[int] = Field(default_factory=lambda: [1, 2, 4])
    stft_resolutions: List[StftResolution] = Field(
        default_factory=lambda: list(DEFAULT_STFT_RESOLUTIONS)
    )
    channels: Tuple[int, int] = Field(
        default=(8, 16), description="Channels of the two hidden conv layers"
    )
    kernel_size: int = Field(default=5, ge=1)
    stride: int = Field(default=3, ge=1)

    @field_validator("periods")
    @classmethod
    def _distinct_primes(cls, periods: List[int]) -> List[int]:
        if len(set(periods)) != len(periods):
            raise ValueError(f"periods must be distinct, got {periods}")
        for period in periods:
            if not _is_prime(period):
                raise ValueError(f"period {period} is not prime")
        return periods

    @field_validator("scales")
    @classmethod
    def _positive_scales(cls, scales: List[int]) -> List[int]:
        if any(scale < 1 for scale in scales):
            raise ValueError(f"scales must be >= 1, got {scales}")
        return scales

    @field_validator("stft_resolutions")
    @classmethod
    def _valid_resolutions(cls, resolutions: List[StftResolution]) -> List[StftResolution]:
        return validate_resolutions(resolutions)

    @model_validator(mode="after")
    def _not_empty(self) -> "DiscriminatorSet":
        if not (self.periods or self.scales or self.stft_resolutions):
            raise ValueError("at least one discriminator is required")
        return self
