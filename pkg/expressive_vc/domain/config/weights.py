from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field


class WeightPaths(BaseModel):
    """Files holding model weights and the speaker embedding"""
    model: Optional[Path] = Field(default=None, description="TSR1 file with model weights")
    speaker: Optional[Path] = Field(default=None, description="TSR1 file with the speaker embedding")

    def missing(self) -> list[Path]:
        """Configured paths that do not exist"""
        return [p for p in (self.model, self.speaker) if p is not None and not p.exists()]
