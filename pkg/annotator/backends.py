"""Annotator backends: something that turns a segment into taxonomy tags.

``KeywordBackend`` is the deterministic baseline driven by an editable JSON
lexicon. ``FileBackend`` replays scores produced elsewhere (for example by a
trained classifier) from a JSONL file keyed by document URL and segment index.
"""

import hashlib
import json
import re
import threading
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

from loguru import logger

from models.policies import PolicyDocument, Segment
from taxonomy.tags import TaxonomyTag, parse_tag_label, sorted_tags
from utils.errors import MalformedAnnotationFile, MalformedRecord, UnknownTagClass, UsageError
from utils.json_utils import dumps_line, parse_json_line

LEXICON_FILE = Path(__file__).parent / "data" / "keyword_lexicon.json"


@runtime_checkable
class AnnotatorBackend(Protocol):
    name: str
    version: str

    def tag(self, segment: Segment, doc_url: str) -> frozenset[TaxonomyTag]:
        ...


class NullBackend:
    """Tags nothing."""

    name = "null"
    version = "1"

    def tag(self, segment: Segment, doc_url: str) -> frozenset[TaxonomyTag]:
        return frozenset()


# ---------- keyword baseline ----------

def _phrase_pattern(phrases: Iterable[str]) -> re.Pattern | None:
    phrases = sorted({p.strip().lower() for p in phrases if p and p.strip()}, key=lambda p: (-len(p), p))
    if not phrases:
        return None
    # anchored at a word start, open at the end: "personaliz" covers "personalize"/"personalization"
    return re.compile(r"(?<!\w)(?:" + "|".join(re.escape(p) for p in phrases) + ")", re.IGNORECASE)


# links in policy text (contact pages, "https://...") must not read as practices
URL_RE = re.compile(r"\b(?:https?://|www\.)\S+", re.IGNORECASE)


class KeywordBackend:
    """Rule-based tagger: a class fires when any of its phrases occurs in the segment."""

    name = "keyword"

    def __init__(self, lexicon_path: str | Path | None = None):
        path = Path(lexicon_path or LEXICON_FILE)
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
        self.version = str(raw.get("version", "0"))
        self._rules: list[tuple[TaxonomyTag, re.Pattern]] = []
        for label, phrases in sorted(raw.get("classes", {}).items()):
            pattern = _phrase_pattern(phrases)
            if pattern is not None:
                self._rules.append((parse_tag_label(label), pattern))

    def tag(self, segment: Segment, doc_url: str = "") -> frozenset[TaxonomyTag]:
        text = URL_RE.sub(" ", segment.text)
        return frozenset(t for t, pattern in self._rules if pattern.search(text))


@lru_cache(maxsize=1)
def default_keyword_backend() -> KeywordBackend:
    return KeywordBackend()


# ---------- replayed external scores ----------

class FileBackend:
    """Replays stored tags; an unknown (document, segment) key yields no tags."""

    def __init__(self, path: str | Path, table: dict[tuple[str, int], frozenset[TaxonomyTag]], digest: str):
        self.name = f"file:{path}"
        self.version = digest
        self._table = table
        self._missing_lock = threading.Lock()
        self._missing: set[tuple[str, int]] = set()

    def __len__(self) -> int:
        return len(self._table)

    def tag(self, segment: Segment, doc_url: str) -> frozenset[TaxonomyTag]:
        key = (doc_url, segment.index)
        tags = self._table.get(key)
        if tags is None:
            with self._missing_lock:
                if key not in self._missing:
                    self._missing.add(key)
                    logger.warning(f"⚠ no stored annotations for {doc_url} segment {segment.index}")
            return frozenset()
        return tags


def _parse_annotation_row(row: dict, where: str) -> tuple[tuple[str, int], frozenset[TaxonomyTag]]:
    doc_url, index, tags = row.get("doc_url"), row.get("segment_index"), row.get("tags")
    if not isinstance(doc_url, str) or not doc_url:
        raise MalformedAnnotationFile(f"{where}: doc_url must be a non-empty string")
    if not isinstance(index, int) or isinstance(index, bool) or index < 0:
        raise MalformedAnnotationFile(f"{where}: segment_index must be a non-negative integer")
    if not isinstance(tags, list):
        raise MalformedAnnotationFile(f"{where}: tags must be a list")
    parsed = []
    for item in tags:
        if not isinstance(item, dict) or "class" not in item:
            raise MalformedAnnotationFile(f"{where}: every tag needs a class")
        score = item.get("score", 1.0)
        if not isinstance(score, (int, float)) or isinstance(score, bool) or not 0.0 <= score <= 1.0:
            raise MalformedAnnotationFile(f"{where}: score must be a number in [0, 1]")
        try:
            parsed.append(parse_tag_label(item["class"], float(score)))
        except UnknownTagClass as e:
            raise UnknownTagClass(f"{where}: {e}") from None
    return (doc_url, index), frozenset(parsed)


def load_external_annotations(path: str | Path) -> FileBackend:
    """Backend replaying JSONL rows ``{doc_url, segment_index, tags: [{class, score}]}``."""
    raw = Path(path).read_bytes()
    table: dict[tuple[str, int], frozenset[TaxonomyTag]] = {}
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        try:
            row = parse_json_line(line, where)
        except MalformedRecord as e:
            raise MalformedAnnotationFile(str(e)) from None
        key, tags = _parse_annotation_row(row, where)
        if key in table:
            logger.warning(f"⚠ {where}: repeated key {key}, later row wins")
        table[key] = tags
    digest = hashlib.sha256(raw).hexdigest()[:12]
    logger.info(f"✔ loaded {len(table)} annotated segments from {path}")
    return FileBackend(path, table, digest)


def export_annotations(docs: Iterable[PolicyDocument], path: str | Path) -> int:
    """Write every segment's annotations in the format ``load_external_annotations`` reads."""
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for doc in docs:
            for seg in doc.segments:
                row = {
                    "doc_url": doc.source_url,
                    "segment_index": seg.index,
                    "tags": [t.model_dump() for t in sorted_tags(seg.annotations)],
                }
                f.write(dumps_line(row) + "\n")
                count += 1
    return count


def resolve_backend(spec: str) -> AnnotatorBackend:
    """``keyword``, ``null`` or ``file:<path>``."""
    if spec == "keyword":
        return default_keyword_backend()
    if spec == "null":
        return NullBackend()
    if spec.startswith("file:"):
        return load_external_annotations(spec[len("file:"):])
    raise UsageError(f"unknown backend {spec!r} (expected keyword, null or file:<path>)")
