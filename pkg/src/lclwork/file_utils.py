"""Utility functions for file operations."""

import json
import logging
import re
from pathlib import Path
from typing import Any

#: Logger instance.
LOGGER = logging.getLogger(__name__)


def save_file(file_path: Path, content: str) -> None:
    """Write UTF-8 text with Unix newlines, creating parent directories."""
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(content, encoding="utf-8", newline="\n")


def save_json(file_path: Path, data: dict[str, Any]) -> None:
    """Save data as JSON to a file, with a trailing newline.

    Parameters
    ----------
    file_path
        Path to the JSON file to create/overwrite.
    data
        Data to serialize as JSON.
    """
    content = json.dumps(data, indent=2, ensure_ascii=False)
    save_file(file_path, content + "\n")
    LOGGER.debug("wrote %s", file_path)


def load_json(file_path: Path) -> Any:
    """Read a JSON document."""
    return json.loads(file_path.read_text(encoding="utf-8"))


def sanitize_filename(filename: str) -> str:
    """Sanitize a filename for cross-platform compatibility.

    Parameters
    ----------
    filename
        The original filename.

    Returns
    -------
    str
        A filename safe on Windows, macOS, and Linux; never empty.
    """
    sanitized = re.sub(r'[<>:"/\\|?*\x00-\x1f\s]', "_", filename)
    sanitized = sanitized.rstrip(" .").lstrip(" ")
    return sanitized or "_"


def certificate_path(output_dir: Path, index: int, task: str) -> Path:
    """Path of the certificate of the task at ``index`` (0-based): ``NN-<task>.json``.

    Parameters
    ----------
    output_dir
        Directory receiving the certificates.
    index
        Position of the task in its run configuration.
    task
        Task name.
    """
    return output_dir / f"{index + 1:02d}-{sanitize_filename(task)}.json"
