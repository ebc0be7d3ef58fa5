"""
Utility functions for quatreg
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Union

from quatreg.errors import JobError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, level: Union[int, str] = logging.INFO) -> logging.Logger:
    """Setup and configure logger for the application"""
    logger = logging.getLogger(name)

    if not any(getattr(h, "_quatreg", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._quatreg = True
        logger.addHandler(handler)
    logger.setLevel(level)

    return logger


def load_json_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON object from disk, reporting syntax errors with file/line context"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise JobError(f"cannot read job file ({e.strerror})", path=str(path)) from e

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise JobError(f"invalid JSON: {e.msg}", path=str(path), line=e.lineno) from e

    if not isinstance(data, dict):
        raise JobError("job file must contain a JSON object", path=str(path), line=1)
    return data


def key_line(path: Union[str, Path], key: str) -> Optional[int]:
    """1-based line of the first `"key":` in a JSON file, or None when absent or unreadable"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError:
        return None
    pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
    for number, line in enumerate(text.splitlines(), start=1):
        if pattern.search(line):
            return number
    return None


def clean_float(value: float) -> float:
    """Plain float with negative zero folded to zero, for stable machine output"""
    return float(value) + 0.0


def clean_floats(payload: Any) -> Any:
    """Apply clean_float to every float inside nested dicts and lists"""
    if isinstance(payload, float):
        return clean_float(payload)
    if isinstance(payload, dict):
        return {k: clean_floats(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [clean_floats(v) for v in payload]
    return payload


def dump_json(payload: Any) -> str:
    """Canonical JSON rendering used for every machine-readable report"""
    return json.dumps(clean_floats(payload), sort_keys=True, indent=2)
