"""Small builders shared by the test modules."""

import random

from annotator.practices import PracticeSet
from models.apps import AppRecord
from models.labels import AppleEntry, AppleLabel, AppleTrackedEntry, GoogleEntry, GoogleLabel, SecurityPractices
from models.policies import PolicyDocument, Segment
from models.snapshots import LabeledApp
from taxonomy.enums import (
    AppleCategory,
    AppleDatatype,
    ApplePrivacyType,
    ApplePurpose,
    DataCategory,
    GoogleCategory,
    GoogleDatatype,
    GooglePurpose,
    Platform,
    TaxonomyPurpose,
)
from taxonomy.tables import apple_category_of, google_membership
from taxonomy.tags import parse_tag_label


def google_category_of(dt: GoogleDatatype) -> GoogleCategory:
    for category, members in google_membership().items():
        if dt in members:
            return category
    raise KeyError(dt)


def g_entry(datatype: str, *purposes: str, category: str | None = None, optional: bool = False) -> GoogleEntry:
    dt = GoogleDatatype(datatype)
    cat = GoogleCategory(category) if category else google_category_of(dt)
    return GoogleEntry(category=cat, datatype=dt, purposes=frozenset(GooglePurpose(p) for p in purposes),
                       optional_flag=optional)


def a_entry(purpose: str, datatype: str, category: str | None = None) -> AppleEntry:
    dt = AppleDatatype(datatype)
    cat = AppleCategory(category) if category else apple_category_of(dt)
    return AppleEntry(purpose=ApplePurpose(purpose), category=cat, datatype=dt)


def a_tracked(datatype: str) -> AppleTrackedEntry:
    dt = AppleDatatype(datatype)
    return AppleTrackedEntry(category=apple_category_of(dt), datatype=dt)


def google_label(collected=(), shared=(), encrypted=None, deletion=None, review=None) -> GoogleLabel:
    return GoogleLabel(
        collected=frozenset(collected),
        shared=frozenset(shared),
        security=SecurityPractices(encrypted_in_transit=encrypted, data_deletion_option=deletion,
                                   independent_review=review),
    )


def apple_label(types=(), linked=(), not_linked=(), tracked=(), tracked_categories=()) -> AppleLabel:
    types = set(ApplePrivacyType(t) for t in types)
    if linked:
        types.add(ApplePrivacyType.DataLinkedToYou)
    if not_linked:
        types.add(ApplePrivacyType.DataNotLinkedToYou)
    if tracked or tracked_categories:
        types.add(ApplePrivacyType.DataUsedToTrackYou)
    return AppleLabel(
        privacy_types=frozenset(types),
        linked_entries=frozenset(linked),
        not_linked_entries=frozenset(not_linked),
        tracked_entries=frozenset(tracked),
        tracked_categories=frozenset(AppleCategory(c) for c in tracked_categories),
    )


def not_collected() -> AppleLabel:
    return AppleLabel(privacy_types=frozenset({ApplePrivacyType.DataNotCollected}))


def google_record(app_id: str, downloads: int | None = 5000, **kw) -> AppRecord:
    kw.setdefault("name", app_id)
    return AppRecord(platform=Platform.google, app_id=app_id, downloads=downloads, **kw)


def apple_record(app_id: str, **kw) -> AppRecord:
    kw.setdefault("name", app_id)
    return AppRecord(platform=Platform.apple, app_id=app_id, **kw)


def google_app(app_id: str, label: GoogleLabel | None = None, **kw) -> LabeledApp:
    return LabeledApp(record=google_record(app_id, **kw), google_label=label)


def apple_app(app_id: str, label: AppleLabel | None = None, **kw) -> LabeledApp:
    return LabeledApp(record=apple_record(app_id, **kw), apple_label=label)


def tagged_doc(*segment_tags, url: str = "https://example.com/privacy") -> PolicyDocument:
    """Document with one segment per argument; each argument is an iterable of tag labels or (label, score)."""
    segments = []
    for i, tags in enumerate(segment_tags):
        parsed = set()
        for t in tags:
            label, score = (t, 1.0) if isinstance(t, str) else t
            parsed.add(parse_tag_label(label, score))
        segments.append(Segment(index=i, text=f"segment {i}", annotations=frozenset(parsed)))
    return PolicyDocument(source_url=url, language="en", word_count=2 * len(segments), segments=tuple(segments))


def random_practices(rng: random.Random) -> PracticeSet:
    def some(enum):
        return frozenset(rng.sample(list(enum), rng.randint(0, 3)))

    return PracticeSet(data_collection=some(DataCategory), data_sharing=some(DataCategory),
                       linked=some(DataCategory), not_linked=some(DataCategory), purposes=some(TaxonomyPurpose),
                       encryption_in_transit=rng.random() < 0.5, data_deletion_option=rng.random() < 0.5,
                       tracking_evidence=rng.random() < 0.5)
