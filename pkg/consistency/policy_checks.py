"""Label versus policy consistency.

in_label: the label states a practice the policy never mentions.
in_policy: the policy states a practice the label leaves out. Policies often cover
several products, so in_policy findings are weaker evidence than in_label ones.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict

from annotator.practices import PracticeSet
from models.labels import AppleLabel, GoogleEntry, GoogleLabel
from taxonomy.enums import DataCategory, Platform, TaxonomyPurpose
from taxonomy.tables import apple_category_map, google_category_map


class Direction(str, Enum):
    in_label = "in_label"
    in_policy = "in_policy"


class FindingLevel(str, Enum):
    high = "high"
    category = "category"
    purpose = "purpose"
    security = "security"


class Practice(str, Enum):
    DataCollection = "DataCollection"
    DataSharing = "DataSharing"
    Encryption = "Encryption"
    DataDeletion = "DataDeletion"
    DataLinkedToYou = "DataLinkedToYou"
    DataNotLinkedToYou = "DataNotLinkedToYou"
    DataUsedToTrackYou = "DataUsedToTrackYou"
    DataNotCollected = "DataNotCollected"
    Purpose = "Purpose"


class Finding(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: FindingLevel
    practice: Practice
    direction: Direction
    category: str | None = None
    # every label entry behind an in_label finding was marked optional
    optional: bool = False

    def sort_key(self) -> tuple:
        return self.level.value, self.practice.value, self.category or "", self.direction.value


class ConsistencyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    platform: Platform
    findings: tuple[Finding, ...] = ()
    uncheckable: tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.findings

    def has(self, practice: Practice, direction: Direction, level: FindingLevel | None = None) -> bool:
        return any(f.practice is practice and f.direction is direction and (level is None or f.level is level)
                   for f in self.findings)


def _report(app_id: str, platform: Platform, findings: set[Finding], uncheckable: set[str]) -> ConsistencyReport:
    return ConsistencyReport(app_id=app_id, platform=platform,
                             findings=tuple(sorted(findings, key=Finding.sort_key)),
                             uncheckable=tuple(sorted(uncheckable)))


def _presence(found: set, level: FindingLevel, practice: Practice, in_label: bool, in_policy: bool,
              category: str | None = None, optional: bool = False) -> None:
    if in_label and not in_policy:
        found.add(Finding(level=level, practice=practice, direction=Direction.in_label,
                          category=category, optional=optional))
    elif in_policy and not in_label:
        found.add(Finding(level=level, practice=practice, direction=Direction.in_policy, category=category))


# ---------- Google ----------

def _google_categories(entries: frozenset[GoogleEntry], group: str,
                       uncheckable: set[str]) -> dict[DataCategory, bool]:
    """Taxonomy category → whether every entry behind it is optional."""
    mapping = google_category_map()
    out: dict[DataCategory, bool] = {}
    for e in entries:
        c = mapping[e.category]
        if c is None:
            uncheckable.add(f"{group}:{e.category.value}")
            continue
        out[c] = out.get(c, True) and e.optional_flag
    return out


def check_google_label_vs_policy(label: GoogleLabel, practices: PracticeSet, app_id: str = "") -> ConsistencyReport:
    found: set[Finding] = set()
    uncheckable: set[str] = set()

    groups = (
        (Practice.DataCollection, "collected", label.collected, practices.data_collection),
        (Practice.DataSharing, "shared", label.shared, practices.data_sharing),
    )
    for practice, group, entries, policy_categories in groups:
        optional = bool(entries) and all(e.optional_flag for e in entries)
        _presence(found, FindingLevel.high, practice, bool(entries), bool(policy_categories), optional=optional)

        label_categories = _google_categories(entries, group, uncheckable)
        for c in sorted(set(label_categories) | set(policy_categories), key=lambda c: c.value):
            _presence(found, FindingLevel.category, practice, c in label_categories, c in policy_categories,
                      category=c.value, optional=label_categories.get(c, False))

    security = label.security
    _presence(found, FindingLevel.security, Practice.Encryption,
              security.encrypted_in_transit is True, practices.encryption_in_transit)
    _presence(found, FindingLevel.security, Practice.DataDeletion,
              security.data_deletion_option is True, practices.data_deletion_option)

    taxonomy_purposes = {p.value for p in TaxonomyPurpose}
    label_purposes = {p.value for e in label.collected | label.shared for p in e.purposes} & taxonomy_purposes
    policy_purposes = {p.value for p in practices.purposes}
    for p in sorted(label_purposes | policy_purposes):
        _presence(found, FindingLevel.purpose, Practice.Purpose, p in label_purposes, p in policy_purposes,
                  category=p)

    return _report(app_id, Platform.google, found, uncheckable)


# ---------- Apple ----------

def _apple_categories(entries, group: str, uncheckable: set[str]) -> set[DataCategory]:
    mapping = apple_category_map()
    out = set()
    for e in entries:
        c = mapping[e.category]
        if c is None:
            uncheckable.add(f"{group}:{e.category.value}")
        else:
            out.add(c)
    return out


def check_apple_label_vs_policy(label: AppleLabel, practices: PracticeSet, app_id: str = "") -> ConsistencyReport:
    found: set[Finding] = set()
    uncheckable: set[str] = set()

    _presence(found, FindingLevel.high, Practice.DataLinkedToYou, label.links, bool(practices.linked))
    _presence(found, FindingLevel.high, Practice.DataUsedToTrackYou, label.tracks, practices.tracking_evidence)

    # negative practices: the policy claims absence, the label does not
    if practices.not_linked and not practices.linked and label.links:
        found.add(Finding(level=FindingLevel.high, practice=Practice.DataNotLinkedToYou,
                          direction=Direction.in_policy))
    if not practices.data_collection and not practices.data_sharing and label.declares_data:
        found.add(Finding(level=FindingLevel.high, practice=Practice.DataNotCollected,
                          direction=Direction.in_policy))

    groups = (
        (Practice.DataLinkedToYou, "linked", label.linked_entries, practices.linked),
        (Practice.DataNotLinkedToYou, "not_linked", label.not_linked_entries, practices.not_linked),
    )
    for practice, group, entries, policy_categories in groups:
        label_categories = _apple_categories(entries, group, uncheckable)
        for c in sorted(label_categories | set(policy_categories), key=lambda c: c.value):
            _presence(found, FindingLevel.category, practice, c in label_categories, c in policy_categories,
                      category=c.value)

    return _report(app_id, Platform.apple, found, uncheckable)
