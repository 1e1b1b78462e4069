"""
Utility functions for netdecode
"""
import hashlib
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Optional, Sequence


def generate_hash(data: str) -> str:
    """Generate SHA256 hash of data"""
    return hashlib.sha256(data.encode()).hexdigest()


def canonical_json(data: Any) -> str:
    """Serialize data with sorted keys and no insignificant whitespace"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temporary file and rename"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def safe_json_loads(text: Optional[str], default: Any = None, expected: Optional[type] = None) -> Any:
    """Parsed JSON, or default when text is not JSON or not of the expected type"""
    try:
        value = json.loads(text)
    except (json.JSONDecodeError, TypeError):
        return default
    if expected is not None and not isinstance(value, expected):
        return default
    return value


def log_base(value: int, base: int) -> float:
    """log_base(value), exact 0 for value 1"""
    if value == 1:
        return 0.0
    return math.log(value) / math.log(base)


def round_value(value: float, decimals: int = 6) -> float:
    """Round to a fixed number of decimals, normalizing -0.0"""
    rounded = round(value, decimals)
    return 0.0 if rounded == 0 else rounded


def format_word(word: Sequence[int], star: int = -1) -> str:
    """Render a word, showing the reserved symbol as '*'"""
    return "(" + ",".join("*" if s == star else str(s) for s in word) + ")"


def format_duration(milliseconds: float) -> str:
    """Format duration in milliseconds to human readable string"""
    seconds = milliseconds / 1000.0
    if seconds < 1:
        return f"{milliseconds:.0f} ms"
    elif seconds < 60:
        return f"{seconds:.1f} s"
    minutes = int(seconds // 60)
    return f"{minutes} min {seconds - 60 * minutes:.0f} s"
