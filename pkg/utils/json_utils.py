import json
import os
from pathlib import Path
from typing import Any, Iterable, Iterator

from loguru import logger

from utils.errors import MalformedRecord


def parse_json_line(line: str, where: str = "") -> dict:
    """Parse one JSONL line into an object; anything else is a MalformedRecord."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"{where}: invalid JSON ({e.msg})") from e
    if not isinstance(obj, dict):
        raise MalformedRecord(f"{where}: expected a JSON object, got {type(obj).__name__}")
    return obj


def read_jsonl(path: str | Path) -> Iterator[dict]:
    """Yield one object per non-blank line of a UTF-8 JSONL file."""
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            yield parse_json_line(line, f"{path}:{lineno}")


def dumps_line(obj: Any) -> str:
    """Stable single-line JSON: keys in insertion order, no ASCII escaping."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: str | Path, rows: Iterable[Any]) -> int:
    os.makedirs(os.path.dirname(os.path.abspath(path)) or ".", exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(dumps_line(row))
            f.write("\n")
            count += 1
    return count


def load_json(path: str | Path, default=None):
    if default is None:
        default = {}
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"⚠ failed to load JSON {path}: {e}")
            return default
    return default


def save_json(path: str | Path, data) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
