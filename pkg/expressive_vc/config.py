import configparser
import logging
import types
from pathlib import Path
from typing import Any, Dict, Optional, Type, Union, get_args, get_origin

from pydantic import BaseModel, ValidationError

from expressive_vc.domain.config import PipelineConfig
from expressive_vc.common.logging import get_logger, set_component_level, resolve_level

# Initialize with default level, will be updated after config load
logger = get_logger("config")


def _update_root_logger(config: PipelineConfig, override: Optional[str] = None) -> None:
    """Update root logger and component loggers with configured levels"""
    root_logger = get_logger("root")

    # Component-specific levels use logging.default, otherwise
    # fall back to the top-level log_level
    if config.runtime.logging.components:
        default_level = config.runtime.logging.default
    else:
        default_level = config.runtime.log_level
    if override is not None:
        default_level = override

    root_logger.logger.setLevel(resolve_level(default_level, logging.INFO))
    logger.debug(f"Set root logger level to {default_level}")

    for component, level_str in config.runtime.logging.components.items():
        set_component_level(component, level_str)
        logger.debug(f"Set {component} logger level to {level_str}")


def _unwrap_optional(annotation: Any) -> tuple[Any, bool]:
    origin = get_origin(annotation)
    if origin is Union or origin is types.UnionType:
        args = [arg for arg in get_args(annotation) if arg is not type(None)]
        if len(args) == 1:
            return args[0], True
    return annotation, False


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return ", ".join(f"{key}:{item}" for key, item in value.items())
    if isinstance(value, (list, tuple)):
        return ", ".join(
            ":".join(str(part) for part in item) if isinstance(item, tuple) else _format_value(item)
            for item in value
        )
    return str(value)


def _parse_value(text: str, annotation: Any) -> Any:
    annotation, optional = _unwrap_optional(annotation)
    text = text.strip()
    if optional and text == "":
        return None

    origin = get_origin(annotation)
    if origin is dict:
        parsed = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, sep, value = item.partition(":")
            if not sep:
                raise ValueError(f"Expected name:value, got '{item}'")
            parsed[key.strip()] = value.strip()
        return parsed
    if origin in (list, tuple):
        items = [part.strip() for part in text.split(",") if part.strip()]
        element = get_args(annotation)[0] if get_args(annotation) else str
        if get_origin(element) is tuple:
            return [tuple(part.strip() for part in item.split(":")) for item in items]
        return items
    # Scalars are coerced by pydantic
    return text


def _section_model(model: Type[BaseModel], key: str) -> Type[BaseModel]:
    field = model.model_fields.get(key)
    if field is None:
        raise ValueError(f"Unknown key '{key}' in {model.__name__}")
    annotation = field.annotation
    if not (isinstance(annotation, type) and issubclass(annotation, BaseModel)):
        raise ValueError(f"'{key}' is not a section")
    return annotation


def _flatten(model: BaseModel, prefix: str = "") -> Dict[str, str]:
    flat: Dict[str, str] = {}
    for name in type(model).model_fields:
        value = getattr(model, name)
        if isinstance(value, BaseModel):
            flat.update(_flatten(value, f"{prefix}{name}."))
        else:
            flat[f"{prefix}{name}"] = _format_value(value)
    return flat


def _unflatten(model: Type[BaseModel], items: Dict[str, str]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    nested: Dict[str, Dict[str, str]] = {}
    for key, text in items.items():
        head, dot, rest = key.partition(".")
        if dot:
            nested.setdefault(head, {})[rest] = text
            continue
        field = model.model_fields.get(key)
        if field is None:
            raise ValueError(f"Unknown key '{key}' in {model.__name__}")
        data[key] = _parse_value(text, field.annotation)
    for head, sub_items in nested.items():
        data[head] = _unflatten(_section_model(model, head), sub_items)
    return data


def serialize_config(config: PipelineConfig) -> str:
    """
    Render a configuration as bracketed sections of key = value lines

    Nested models become dotted keys, lists are comma separated and STFT
    resolutions are written as fft:hop:win.
    """
    lines = []
    for section in PipelineConfig.model_fields:
        lines.append(f"[{section}]")
        for key, value in _flatten(getattr(config, section)).items():
            lines.append(f"{key} = {value}".rstrip())
        lines.append("")
    return "\n".join(lines)


def parse_config(text: str) -> PipelineConfig:
    """
    Parse and validate configuration text

    Raises:
        ValueError: If the text is malformed or names unknown keys
        ValidationError: If a value violates the schema
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__defaults__")
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ValueError(f"Malformed configuration: {e}")

    data = {}
    for section in parser.sections():
        model = _section_model(PipelineConfig, section)
        data[section] = _unflatten(model, dict(parser.items(section)))
    return PipelineConfig.model_validate(data)


def load_config(config_path: Union[str, Path], log_level: Optional[str] = None) -> PipelineConfig:
    """
    Load and validate a pipeline configuration file

    Args:
        config_path: Path to the configuration file
        log_level: Overrides the configured default logging level

    Returns:
        Validated PipelineConfig instance

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If config file is malformed
        ValidationError: If config is invalid according to schema
    """
    config_path = Path(config_path)

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    try:
        config = parse_config(config_path.read_text(encoding="utf-8"))
    except ValidationError as e:
        logger.error(f"Configuration validation failed for {config_path}:")
        for error in e.errors():
            logger.error(f"- {' -> '.join(str(loc) for loc in error['loc'])}: {error['msg']}")
        raise

    _update_root_logger(config, log_level)

    logger.info(f"Loaded configuration from {config_path}")
    logger.debug(f"Config:\n{serialize_config(config)}")
    return config


def save_config(config: PipelineConfig, config_path: Union[str, Path]) -> None:
    """Write a configuration so that load_config returns an equal object"""
    config_path = Path(config_path)
    try:
        config_path.write_text(serialize_config(config), encoding="utf-8", newline="\n")
    except OSError as e:
        raise OSError(f"Cannot write config {config_path}: {e}") from e


def default_config(log_level: Optional[str] = None) -> PipelineConfig:
    """Defaults used when no --config is given"""
    config = PipelineConfig()
    _update_root_logger(config, log_level)
    return config
