from pydantic import BaseModel, Field


class LossWeights(BaseModel):
    """Coefficients of the generator loss terms"""
    adv: float = Field(default=1.0, ge=0)
    fm: float = Field(default=1.0, ge=0)
    stft: float = Field(default=1.0, ge=0)


class TrainingConfig(BaseModel):
    """Smoke-training settings"""
    steps: int = Field(default=200, ge=1)
    learning_rate: float = Field(default=3e-3, gt=0, description="Plain SGD step size")
    aux_path: bool = Field(
        default=True, description="Also reconstruct from H_w + H_p, bypassing fusion"
    )
    aux_weight: float = Field(default=1.0, ge=0, description="Weight of the auxiliary path")
    speed_augment: bool = Field(
        default=True, description="Alternate original and speed-augmented inputs"
    )
    loss_weights: LossWeights = Field(default_factory=LossWeights)
    min_clip_seconds: float = Field(default=0.5, gt=0)
