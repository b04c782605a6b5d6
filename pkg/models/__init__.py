from models.apps import AgeRating, AppRecord, PriceClass, parse_app_record, serialize_app_record
from models.labels import (
    AppleEntry,
    AppleLabel,
    AppleTrackedEntry,
    GoogleEntry,
    GoogleLabel,
    SecurityPractices,
    Violation,
    parse_apple_label,
    parse_google_label,
    validate_apple_label,
    validate_google_label,
)
from models.policies import PolicyDocument, Rejection, RejectReason, Segment, count_words
from models.snapshots import (
    LabeledApp,
    Snapshot,
    SnapshotEntry,
    load_snapshot,
    parse_labeled_app,
    read_apps,
    serialize_labeled_app,
)
