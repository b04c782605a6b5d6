import re
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator

from taxonomy.enums import DataCategory, TaxonomyPurpose
from utils.errors import UnknownTagClass


class TagKind(str, Enum):
    FirstPartyCollectionShare = "FirstPartyCollectionShare"
    ThirdPartySharingCollection = "ThirdPartySharingCollection"
    Identifiability = "Identifiability"
    DoesDoesNot = "DoesDoesNot"
    EncryptionInTransit = "EncryptionInTransit"
    DataDeletionOption = "DataDeletionOption"
    DataCategory = "DataCategory"
    Purpose = "Purpose"


IDENTIFIABLE = "identifiable"
ANONYMOUS = "anonymous"
DOES = "does"
DOES_NOT = "does_not"

_ALLOWED_VALUES: dict[TagKind, frozenset[str]] = {
    TagKind.Identifiability: frozenset({IDENTIFIABLE, ANONYMOUS}),
    TagKind.DoesDoesNot: frozenset({DOES, DOES_NOT}),
    TagKind.DataCategory: frozenset(c.value for c in DataCategory),
    TagKind.Purpose: frozenset(p.value for p in TaxonomyPurpose),
}

_LABEL_RE = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*([A-Za-z_]+)\s*\))?\s*$")


def split_label(label: str) -> tuple[TagKind, str | None]:
    """``"DataCategory(Location)"`` -> ``(TagKind.DataCategory, "Location")``."""
    m = _LABEL_RE.match(label if isinstance(label, str) else "")
    if not m:
        raise UnknownTagClass(f"unknown tag class {label!r}")
    kind_raw, value = m.group(1), m.group(2)
    try:
        kind = TagKind(kind_raw)
    except ValueError:
        raise UnknownTagClass(f"unknown tag class {label!r}") from None
    allowed = _ALLOWED_VALUES.get(kind)
    if (allowed is None) != (value is None) or (allowed is not None and value not in allowed):
        raise UnknownTagClass(f"unknown tag class {label!r}")
    return kind, value


class TaxonomyTag(BaseModel):
    """One classifier verdict on a segment, e.g. ``DataCategory(Location)`` with its score.

    Serializes as ``{"class": "DataCategory(Location)", "score": 0.93}`` and accepts
    the same shape back.
    """

    model_config = ConfigDict(frozen=True)

    kind: TagKind
    value: str | None = None
    score: float = Field(1.0, ge=0.0, le=1.0)

    @model_validator(mode="before")
    @classmethod
    def _from_label(cls, data):
        if isinstance(data, dict) and "class" in data:
            kind, value = split_label(data["class"])
            return {"kind": kind, "value": value, "score": data.get("score", 1.0)}
        return data

    @model_validator(mode="after")
    def _check_value(self):
        allowed = _ALLOWED_VALUES.get(self.kind)
        if allowed is None and self.value is not None:
            raise ValueError(f"{self.kind.value} takes no value")
        if allowed is not None and self.value not in allowed:
            raise ValueError(f"{self.kind.value} requires one of {sorted(allowed)}, got {self.value!r}")
        return self

    @model_serializer
    def _to_label(self) -> dict:
        return {"class": self.label, "score": self.score}

    @property
    def label(self) -> str:
        return self.kind.value if self.value is None else f"{self.kind.value}({self.value})"


def parse_tag_label(label: str, score: float = 1.0) -> TaxonomyTag:
    """Parse ``Kind`` or ``Kind(value)`` into a tag; anything outside the taxonomy is UnknownTagClass."""
    kind, value = split_label(label)
    return TaxonomyTag(kind=kind, value=value, score=score)


def tag(kind: TagKind, value=None, score: float = 1.0) -> TaxonomyTag:
    """Shorthand constructor; ``value`` may be an enum member or its string."""
    if isinstance(value, Enum):
        value = value.value
    return TaxonomyTag(kind=kind, value=value, score=score)


def sorted_tags(tags) -> list[TaxonomyTag]:
    return sorted(tags, key=lambda t: (t.label, t.score))
