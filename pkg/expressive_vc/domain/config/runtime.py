from typing import Dict, Optional

from pydantic import BaseModel, Field


class LoggingComponentConfig(BaseModel):
    """Component-specific logging configuration"""
    default: str = Field(
        default="INFO",
        description="Default logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )
    components: Dict[str, str] = Field(
        default_factory=dict,
        description="Component-specific log levels"
    )


class RuntimeConfig(BaseModel):
    """Run-wide settings: seed and logging"""
    seed: Optional[int] = Field(
        default=None,
        ge=0,
        lt=1 << 64,
        description="Master seed; mandatory for randomized commands"
    )
    log_level: str = Field(
        default="INFO",
        description="Default logging level when no component levels are configured"
    )
    logging: LoggingComponentConfig = Field(
        default_factory=LoggingComponentConfig,
        description="Logging configuration"
    )
