from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class CorrelationReport(BaseModel):
    """Pearson correlations of log-f0 and energy between two utterances"""
    model_config = ConfigDict(frozen=True)

    lf0_r: Optional[float] = Field(
        default=None, ge=-1.0, le=1.0,
        description="None when fewer than two frames are voiced in both tracks"
    )
    energy_r: float = Field(ge=-1.0, le=1.0)
    n_frames_used: int = Field(ge=0, description="Frames shared by both tracks")
    n_voiced_used: int = Field(default=0, ge=0, description="Jointly voiced frames behind lf0_r")

    def to_text(self) -> str:
        """key=value lines with six decimals"""
        lf0 = "nan" if self.lf0_r is None else f"{self.lf0_r:.6f}"
        return (
            f"lf0_r = {lf0}\n"
            f"energy_r = {self.energy_r:.6f}\n"
            f"n_frames_used = {self.n_frames_used}\n"
        )

    def to_csv_row(self) -> str:
        lf0 = "nan" if self.lf0_r is None else repr(self.lf0_r)
        return f"{lf0},{self.energy_r!r},{self.n_frames_used}\n"


class F0Summary(BaseModel):
    """Summary statistics over the voiced frames of an f0 track"""
    model_config = ConfigDict(frozen=True)

    n_frames: int
    n_voiced: int
    voiced_ratio: float
    mean_hz: Optional[float] = None
    median_hz: Optional[float] = None
    std_hz: Optional[float] = None
    min_hz: Optional[float] = None
    max_hz: Optional[float] = None
