import tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from open_system_pt.domain.simulation import SimulationConfig
from open_system_pt.exceptions import ConfigError
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


def _set_dotted(data: dict[str, Any], key: str, value: Any) -> None:
    node = data
    *parents, leaf = key.split(".")
    for part in parents:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot override '{key}': '{part}' is not a table")
    node[leaf] = value


def format_validation_error(error: ValidationError) -> str:
    """One 'dotted.path: message' line per pydantic error."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{path}: {item['msg']}")
    return "; ".join(lines)


def parse_config(raw: dict[str, Any], overrides: dict[str, Any] | None = None) -> SimulationConfig:
    """
    Validate a configuration mapping after applying dotted-key overrides.
    Args:
        raw: Parsed TOML document.
        overrides: e.g. {"dt": 0.01, "model.n_modes": 4}; None values are skipped.
    Returns:
        SimulationConfig: The validated configuration.
    Raises:
        ConfigError: Validation failed; the message names the field path.
    """
    data = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, key, value)
    try:
        return SimulationConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {format_validation_error(e)}") from e


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> SimulationConfig:
    """
    Load a TOML run configuration.
    Raises:
        ConfigError: Missing file, TOML syntax error (with line and column) or invalid fields.
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"configuration file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        line = getattr(e, "lineno", None)
        column = getattr(e, "colno", None)
        where = f" at line {line}, column {column}" if line is not None else ""
        raise ConfigError(f"{path}: TOML syntax error{where}: {e}") from e
    config = parse_config(raw, overrides)
    logger.info(f"Loaded {config.model.kind} configuration from {path}")
    return config
