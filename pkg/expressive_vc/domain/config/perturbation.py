from typing import Tuple

from pydantic import BaseModel, Field, field_validator


def _ordered(bounds: Tuple[float, float]) -> Tuple[float, float]:
    low, high = bounds
    if low > high:
        raise ValueError(f"range lower bound {low} exceeds upper bound {high}")
    return bounds


class PerturbationRanges(BaseModel):
    """Sampling ranges of the perturbation chain and speed augmentation

    Ratios are drawn uniformly from their range and then inverted with
    probability ``invert_probability``.
    """
    formant_ratio: Tuple[float, float] = Field(default=(1.0, 1.4))
    pitch_shift_ratio: Tuple[float, float] = Field(default=(1.0, 2.0))
    pitch_range_ratio: Tuple[float, float] = Field(default=(1.0, 1.5))
    invert_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    peq_bands: int = Field(default=8, ge=0, description="Number of peaking bands")
    peq_min_hz: float = Field(default=60.0, gt=0)
    peq_max_hz: float = Field(default=10000.0, gt=0)
    peq_q: Tuple[float, float] = Field(default=(2.0, 5.0))
    peq_gain_db: Tuple[float, float] = Field(default=(-12.0, 12.0))
    shelves: bool = Field(default=True, description="Add low and high shelves to the peaking bands")
    shelf_q: float = Field(default=0.707, gt=0)
    f0_min: float = Field(default=50.0, gt=0, description="Pitch search floor for randomization")
    f0_max: float = Field(default=600.0, gt=0, description="Pitch search ceiling for randomization")
    speed_factor: Tuple[float, float] = Field(default=(1.1, 1.5))

    @field_validator(
        "formant_ratio", "pitch_shift_ratio", "pitch_range_ratio",
        "peq_q", "peq_gain_db", "speed_factor"
    )
    @classmethod
    def _check_order(cls, bounds: Tuple[float, float]) -> Tuple[float, float]:
        return _ordered(bounds)
