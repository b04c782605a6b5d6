"""Ingest lines (record plus labels) and dated Google Play snapshots."""

import datetime as dt
from pathlib import Path
from typing import Any, Iterator, Mapping

from loguru import logger
from pydantic import BaseModel, ConfigDict

from models.apps import AppRecord, parse_app_record, serialize_app_record
from models.labels import AppleLabel, GoogleLabel, parse_apple_label, parse_google_label
from taxonomy.enums import Platform
from utils.errors import DataError, MalformedRecord
from utils.json_utils import load_json, parse_json_line, save_json, write_jsonl


class LabeledApp(BaseModel):
    """One line of the canonical ingest format."""

    model_config = ConfigDict(frozen=True)

    record: AppRecord
    apple_label: AppleLabel | None = None
    google_label: GoogleLabel | None = None

    @property
    def app_id(self) -> str:
        return self.record.app_id

    @property
    def platform(self) -> Platform:
        return self.record.platform

    @property
    def label(self) -> AppleLabel | GoogleLabel | None:
        return self.apple_label if self.record.platform is Platform.apple else self.google_label


def parse_labeled_app(obj: Mapping[str, Any]) -> LabeledApp:
    record = parse_app_record(obj)
    apple_raw, google_raw = obj.get("apple_label"), obj.get("google_label")
    if record.platform is Platform.apple and google_raw is not None:
        raise MalformedRecord(f"apple:{record.app_id}: google_label on an apple record")
    if record.platform is Platform.google and apple_raw is not None:
        raise MalformedRecord(f"google:{record.app_id}: apple_label on a google record")
    return LabeledApp(
        record=record,
        apple_label=parse_apple_label(apple_raw) if apple_raw is not None else None,
        google_label=parse_google_label(google_raw) if google_raw is not None else None,
    )


def serialize_labeled_app(app: LabeledApp) -> dict[str, Any]:
    out = serialize_app_record(app.record)
    out["apple_label"] = app.apple_label.model_dump(mode="json") if app.apple_label else None
    out["google_label"] = app.google_label.model_dump(mode="json") if app.google_label else None
    return out


def iter_apps(path: str | Path, rejects: list | None = None) -> Iterator[LabeledApp]:
    """Yield apps from a canonical JSONL file.

    With ``rejects`` given, bad lines are appended to it as ``{line, error}`` and
    skipped; otherwise the first bad line raises.
    """
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield parse_labeled_app(parse_json_line(line, f"{path}:{lineno}"))
            except DataError as e:
                if rejects is None:
                    raise
                logger.warning(f"⚠ {path}:{lineno}: {e}")
                rejects.append({"line": lineno, "error": str(e), "type": type(e).__name__})


def read_apps(path: str | Path, rejects: list | None = None) -> list[LabeledApp]:
    return list(iter_apps(path, rejects))


def write_apps(path: str | Path, apps) -> int:
    return write_jsonl(path, (serialize_labeled_app(a) for a in apps))


# ---------- snapshots ----------

class SnapshotEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    record: AppRecord
    google_label: GoogleLabel | None = None


class Snapshot(BaseModel):
    model_config = ConfigDict(frozen=True)

    captured_at: dt.date
    entries: dict[str, SnapshotEntry]
    source: str = ""


def manifest_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.manifest.json")


def build_snapshot(captured_at: dt.date, apps, source: str = "") -> Snapshot:
    entries: dict[str, SnapshotEntry] = {}
    for app in apps:
        if app.platform is not Platform.google:
            raise MalformedRecord(f"{source}: snapshot entry {app.app_id} is not a google record")
        if app.app_id in entries:
            raise MalformedRecord(f"{source}: app {app.app_id} listed twice in one snapshot")
        entries[app.app_id] = SnapshotEntry(record=app.record, google_label=app.google_label)
    return Snapshot(captured_at=captured_at, entries=entries, source=source)


def load_snapshot(path: str | Path) -> Snapshot:
    """Read a snapshot JSONL file and its ``<stem>.manifest.json`` sidecar."""
    sidecar = manifest_path(path)
    manifest = load_json(sidecar, default=None)
    if not isinstance(manifest, dict) or "captured_at" not in manifest:
        raise MalformedRecord(f"{sidecar}: missing or invalid snapshot manifest")
    try:
        captured_at = dt.date.fromisoformat(str(manifest["captured_at"]))
    except ValueError as e:
        raise MalformedRecord(f"{sidecar}: captured_at must be YYYY-MM-DD") from e
    return build_snapshot(captured_at, iter_apps(path), source=str(path))


def save_snapshot(path: str | Path, snapshot: Snapshot) -> None:
    apps = (LabeledApp(record=e.record, google_label=e.google_label)
            for _, e in sorted(snapshot.entries.items()))
    write_apps(path, apps)
    save_json(manifest_path(path), {"captured_at": snapshot.captured_at.isoformat()})
