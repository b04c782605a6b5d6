"""Cleaned policy documents, their segments, and rejected fetches."""

import re
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.labels import SortedFrozenSet
from taxonomy.tags import TaxonomyTag

# maximal run of letters or digits
WORD = re.compile(r"[^\W_]+")


def count_words(text: str) -> int:
    return len(WORD.findall(text or ""))


class Segment(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=0)
    text: str = Field(min_length=1)
    annotations: SortedFrozenSet[TaxonomyTag] = frozenset()

    @property
    def word_count(self) -> int:
        return count_words(self.text)


class PolicyDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    source_url: str
    language: str
    language_confidence: float = Field(1.0, ge=0.0, le=1.0)
    word_count: int = Field(ge=0)
    segments: tuple[Segment, ...] = ()
    is_policy: bool = False
    policy_score: float | None = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _consistent(self):
        total = sum(s.word_count for s in self.segments)
        if total != self.word_count:
            raise ValueError(f"word_count {self.word_count} != sum of segment words {total}")
        indexes = [s.index for s in self.segments]
        if any(b <= a for a, b in zip(indexes, indexes[1:])):
            raise ValueError("segment indexes must be strictly increasing")
        return self

    @property
    def text(self) -> str:
        return "\n\n".join(s.text for s in self.segments)


class RejectReason(str, Enum):
    too_short = "too_short"
    non_english = "non_english"
    unsupported_format = "unsupported_format"
    fetch_failed = "fetch_failed"
    not_policy = "not_policy"


class Rejection(BaseModel):
    """A document that did not make it into the corpus; language is recorded even here."""

    model_config = ConfigDict(frozen=True)

    source_url: str
    reason: RejectReason
    language: str = "und"
    language_confidence: float = Field(0.0, ge=0.0, le=1.0)
    word_count: int = Field(0, ge=0)
    detail: str = ""
