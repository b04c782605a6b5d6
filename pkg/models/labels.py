"""Typed Apple Privacy Label and Google Data Safety Section values.

Both label formats are four-level hierarchies. They are stored here flattened into
sets of leaf entries, which is what every comparison downstream works on. Parsing
rejects vocabulary outside the closed enumerations; structural rules (datatype
belongs to category, Data Not Collected stands alone, ...) are reported by the
``validate_*`` functions as data instead of raised.
"""

import json
from enum import Enum
from typing import Annotated, Any, Mapping, TypeVar

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, SerializationInfo, ValidationError

from taxonomy.enums import (
    AppleCategory,
    AppleDatatype,
    ApplePrivacyType,
    ApplePurpose,
    GoogleCategory,
    GoogleDatatype,
    GooglePurpose,
)
from taxonomy.tables import apple_membership, google_membership
from utils.errors import InvalidEnum, MalformedRecord, UnknownCategory, UnknownDatatype, UnknownPurpose

T = TypeVar("T")


def _dump_item(item: Any) -> Any:
    if isinstance(item, BaseModel):
        return item.model_dump(mode="json")
    if isinstance(item, Enum):
        return item.value
    return item


def _dump_sorted(items: frozenset, info: SerializationInfo) -> list:
    dumped = [_dump_item(i) for i in items]
    return sorted(dumped, key=lambda d: json.dumps(d, sort_keys=True))


# frozensets serialize as sorted lists so label JSON is byte-stable
SortedFrozenSet = Annotated[frozenset[T], PlainSerializer(_dump_sorted)]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ---------- Apple ----------

class AppleEntry(_Frozen):
    purpose: ApplePurpose
    category: AppleCategory
    datatype: AppleDatatype

    def __str__(self) -> str:
        return f"{self.purpose.value}/{self.category.value}/{self.datatype.value}"


class AppleTrackedEntry(_Frozen):
    """Datatype listed under Data Used to Track You; tracking has no purpose level."""

    category: AppleCategory
    datatype: AppleDatatype

    def __str__(self) -> str:
        return f"{self.category.value}/{self.datatype.value}"


class AppleLabel(_Frozen):
    privacy_types: SortedFrozenSet[ApplePrivacyType] = frozenset()
    tracked_categories: SortedFrozenSet[AppleCategory] = frozenset()
    tracked_entries: SortedFrozenSet[AppleTrackedEntry] = frozenset()
    linked_entries: SortedFrozenSet[AppleEntry] = frozenset()
    not_linked_entries: SortedFrozenSet[AppleEntry] = frozenset()

    @property
    def collects(self) -> bool:
        return ApplePrivacyType.DataNotCollected not in self.privacy_types

    @property
    def declares_data(self) -> bool:
        """Any privacy type other than Data Not Collected, or any listed data."""
        return (bool(self.privacy_types - {ApplePrivacyType.DataNotCollected}) or bool(self.tracked_categories)
                or bool(self.tracked_entries) or bool(self.linked_entries) or bool(self.not_linked_entries))

    @property
    def tracks(self) -> bool:
        return (ApplePrivacyType.DataUsedToTrackYou in self.privacy_types
                or bool(self.tracked_categories) or bool(self.tracked_entries))

    @property
    def links(self) -> bool:
        return ApplePrivacyType.DataLinkedToYou in self.privacy_types or bool(self.linked_entries)


# ---------- Google ----------

class SecurityPractices(_Frozen):
    """``None`` means the developer did not state the practice, which is not the same as ``False``."""

    encrypted_in_transit: bool | None = None
    data_deletion_option: bool | None = None
    independent_review: bool | None = None

    @property
    def any_stated(self) -> bool:
        return any(v is not None for v in (self.encrypted_in_transit, self.data_deletion_option,
                                           self.independent_review))


class GoogleEntry(_Frozen):
    category: GoogleCategory
    datatype: GoogleDatatype
    purposes: SortedFrozenSet[GooglePurpose] = frozenset()
    optional_flag: bool = False

    def __str__(self) -> str:
        purposes = ",".join(sorted(p.value for p in self.purposes))
        return f"{self.category.value}/{self.datatype.value}[{purposes}]"


class GoogleLabel(_Frozen):
    collected: SortedFrozenSet[GoogleEntry] = frozenset()
    shared: SortedFrozenSet[GoogleEntry] = frozenset()
    security: SecurityPractices = Field(default_factory=SecurityPractices)

    @property
    def collects(self) -> bool:
        """True when anything is collected or shared; sharing without collecting counts."""
        return bool(self.collected) or bool(self.shared)


# ---------- validation ----------

class Violation(_Frozen):
    invariant: str
    element: str
    message: str


NOT_COLLECTED_SOLE = "not_collected_sole_type"
NOT_COLLECTED_EMPTY = "not_collected_without_entries"
DATATYPE_IN_CATEGORY = "datatype_in_category"
PURPOSES_NON_EMPTY = "purposes_non_empty"


def _sorted_violations(violations: set[Violation]) -> list[Violation]:
    return sorted(violations, key=lambda v: (v.invariant, v.element, v.message))


def validate_apple_label(label: AppleLabel) -> list[Violation]:
    """Every broken AppleLabel invariant, one Violation per offending element."""
    found: set[Violation] = set()
    types = label.privacy_types
    if ApplePrivacyType.DataNotCollected in types:
        others = sorted(t.value for t in types if t is not ApplePrivacyType.DataNotCollected)
        for other in others:
            found.add(Violation(invariant=NOT_COLLECTED_SOLE, element=other,
                                message="DataNotCollected must be sole type"))
        groups = {
            "tracked_categories": label.tracked_categories,
            "tracked_entries": label.tracked_entries,
            "linked_entries": label.linked_entries,
            "not_linked_entries": label.not_linked_entries,
        }
        for group, items in groups.items():
            for item in items:
                found.add(Violation(invariant=NOT_COLLECTED_EMPTY, element=f"{group}:{item}",
                                    message="DataNotCollected label must not list data"))

    membership = apple_membership()
    entry_groups = (
        ("tracked_entries", label.tracked_entries),
        ("linked_entries", label.linked_entries),
        ("not_linked_entries", label.not_linked_entries),
    )
    for group, entries in entry_groups:
        for entry in entries:
            if entry.datatype not in membership.get(entry.category, frozenset()):
                found.add(Violation(invariant=DATATYPE_IN_CATEGORY, element=f"{group}:{entry}",
                                    message="datatype not in category"))
    return _sorted_violations(found)


def validate_google_label(label: GoogleLabel) -> list[Violation]:
    """Every broken GoogleLabel invariant. Sharing without collecting is legal."""
    found: set[Violation] = set()
    membership = google_membership()
    for group, entries in (("collected", label.collected), ("shared", label.shared)):
        for entry in entries:
            if entry.datatype not in membership.get(entry.category, frozenset()):
                found.add(Violation(invariant=DATATYPE_IN_CATEGORY, element=f"{group}:{entry}",
                                    message="datatype not in category"))
            if not entry.purposes:
                found.add(Violation(invariant=PURPOSES_NON_EMPTY, element=f"{group}:{entry}",
                                    message="entry declares no purpose"))
    return _sorted_violations(found)


# ---------- parsing ----------

_ENUM_ERRORS = {
    "datatype": UnknownDatatype,
    "purpose": UnknownPurpose,
    "purposes": UnknownPurpose,
    "category": UnknownCategory,
    "tracked_categories": UnknownCategory,
}


def _raise_for(e: ValidationError, what: str):
    err = e.errors()[0]
    loc = [str(p) for p in err.get("loc", ())]
    where = ".".join(loc) or what
    if err.get("type") == "enum":
        field = next((p for p in reversed(loc) if p in _ENUM_ERRORS or p == "privacy_types"), None)
        if field in _ENUM_ERRORS:
            raise _ENUM_ERRORS[field](f"{what}.{where}: {err.get('input')!r}") from e
        expected = (err.get("ctx") or {}).get("expected", "")
        raise InvalidEnum(f"{what}.{where}", err.get("input"), [expected] if expected else None) from e
    raise MalformedRecord(f"{what}.{where}: {err.get('msg')}") from e


def parse_apple_label(obj: Mapping[str, Any]) -> AppleLabel:
    try:
        return AppleLabel.model_validate(obj)
    except ValidationError as e:
        _raise_for(e, "apple_label")


def parse_google_label(obj: Mapping[str, Any]) -> GoogleLabel:
    try:
        return GoogleLabel.model_validate(obj)
    except ValidationError as e:
        _raise_for(e, "google_label")


def serialize_label(label: AppleLabel | GoogleLabel) -> dict[str, Any]:
    return label.model_dump(mode="json")
