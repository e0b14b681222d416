"""Reading the effective settings and run configurations."""

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from lclwork.config import RunConfig, Settings, get_app_config_path
from lclwork.exceptions import ConfigError

#: Logger instance.
LOGGER = logging.getLogger(__name__)


def get_settings(**overrides: Any) -> Settings:
    """Get the effective settings.

    Parameters
    ----------
    overrides
        Explicit values; they win over the environment and the settings file.

    Raises
    ------
    ConfigError
        If the settings file or environment holds invalid values.
    """
    LOGGER.debug("settings file: %s", get_app_config_path())
    try:
        return Settings(**overrides)
    except ValidationError as e:
        msg = f"invalid settings: {e}"
        raise ConfigError(msg) from e


def load_run_config(path: Path) -> RunConfig:
    """Read and validate a run configuration.

    Parameters
    ----------
    path
        Path to the JSON document.

    Returns
    -------
    RunConfig
        The validated configuration.

    Raises
    ------
    ConfigError
        If the file cannot be read, is not JSON, or does not validate.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        msg = f"cannot read run configuration {path}: {e}"
        raise ConfigError(msg) from e
    except json.JSONDecodeError as e:
        msg = f"run configuration {path} is not valid JSON: {e}"
        raise ConfigError(msg) from e
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        msg = f"invalid run configuration {path}: {e}"
        raise ConfigError(msg) from e
    LOGGER.debug("loaded %d tasks from %s", len(config.tasks), path)
    return config
