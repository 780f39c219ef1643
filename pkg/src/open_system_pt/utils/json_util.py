import json
import os
import tempfile
from pathlib import Path
from typing import Any


def write_json_atomic(path: str | Path, payload: dict[str, Any]) -> Path:
    """
    Write a JSON document next to its final location and move it into place.
    Args:
        path: Destination file.
        payload: JSON-serializable mapping.
    Returns:
        Path: The written file.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return target


def load_json(path: str | Path) -> dict:
    """
    Load a JSON document.
    Returns:
        dict: Parsed JSON data.
    """
    with open(path, encoding="utf-8") as f:
        return json.load(f)
