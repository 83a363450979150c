from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .audio import AudioBuffer

BandKind = Literal["peaking", "low_shelf", "high_shelf"]

# Ratios outside this open interval are rejected everywhere in the chain.
RATIO_BOUNDS = (0.25, 4.0)


class PeqBand(BaseModel):
    """One band of the parametric equalizer"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    center_hz: float = Field(gt=0, description="Center (peaking) or corner (shelf) frequency")
    q: float = Field(gt=0, description="Quality factor")
    gain_db: float = Field(description="Band gain in dB")
    kind: BandKind = Field(default="peaking")


class BiquadCoeffs(BaseModel):
    """Second-order section with a0 normalized to 1"""
    model_config = ConfigDict(frozen=True)

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def poles(self) -> np.ndarray:
        """Roots of 1 + a1 z^-1 + a2 z^-2"""
        return np.roots([1.0, self.a1, self.a2])

    def is_stable(self) -> bool:
        """True when both poles lie strictly inside the unit circle"""
        return bool(np.all(np.abs(self.poles()) < 1.0))

    def as_sos(self) -> List[float]:
        """Row in scipy's second-order-section layout"""
        return [self.b0, self.b1, self.b2, 1.0, self.a1, self.a2]


class PerturbConfig(BaseModel):
    """Sampled parameters of one perturbation, together with the seed that produced them"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(ge=0, lt=1 << 64)
    peq: List[PeqBand] = Field(default_factory=list)
    formant_ratio: float = Field(default=1.0, gt=RATIO_BOUNDS[0], lt=RATIO_BOUNDS[1])
    pitch_shift_ratio: float = Field(default=1.0, gt=RATIO_BOUNDS[0], lt=RATIO_BOUNDS[1])
    pitch_range_ratio: float = Field(default=1.0, gt=RATIO_BOUNDS[0], lt=RATIO_BOUNDS[1])

    def to_text(self) -> str:
        """Human-readable key=value block; floats use repr so from_text is exact"""
        lines = [
            f"seed={self.seed}",
            f"formant_ratio={self.formant_ratio!r}",
            f"pitch_shift_ratio={self.pitch_shift_ratio!r}",
            f"pitch_range_ratio={self.pitch_range_ratio!r}",
            f"peq_bands={len(self.peq)}",
        ]
        for index, band in enumerate(self.peq):
            lines.append(f"peq.{index}.kind={band.kind}")
            lines.append(f"peq.{index}.center_hz={band.center_hz!r}")
            lines.append(f"peq.{index}.q={band.q!r}")
            lines.append(f"peq.{index}.gain_db={band.gain_db!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PerturbConfig":
        """Parse a block written by to_text"""
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"Malformed perturbation line: {raw!r}")
            values[key.strip()] = value.strip()

        count = int(values.get("peq_bands", "0"))
        bands = [
            PeqBand(
                kind=values[f"peq.{i}.kind"],
                center_hz=float(values[f"peq.{i}.center_hz"]),
                q=float(values[f"peq.{i}.q"]),
                gain_db=float(values[f"peq.{i}.gain_db"]),
            )
            for i in range(count)
        ]
        return cls(
            seed=int(values["seed"]),
            peq=bands,
            formant_ratio=float(values["formant_ratio"]),
            pitch_shift_ratio=float(values["pitch_shift_ratio"]),
            pitch_range_ratio=float(values["pitch_range_ratio"]),
        )

    @classmethod
    def neutral(cls, seed: int = 0) -> "PerturbConfig":
        """Configuration that leaves audio unchanged: no EQ gain, all ratios 1"""
        return cls(seed=seed)


class PitchShiftResult(BaseModel):
    """Output of pitch randomization; ``voiced`` is False when the input had no voiced frame"""
    model_config = ConfigDict(frozen=True)

    audio: AudioBuffer
    voiced: bool = True
