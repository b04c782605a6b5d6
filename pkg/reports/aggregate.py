"""Corpus-level counts and fractions.

Every fraction carries its numerator, its denominator and what the denominator
counts; a fraction over an empty denominator has value ``None``.
"""

from collections import defaultdict
from enum import Enum
from typing import Iterable

from loguru import logger
from pydantic import BaseModel, ConfigDict

from consistency.cross_platform import CrossReport
from consistency.flags import (
    PermissionMismatch,
    flag_encrypt_without_collect,
    flag_encryption_permission_mismatch,
    flag_no_security_details,
)
from consistency.policy_checks import ConsistencyReport, Direction, FindingLevel, Practice
from models.apps import AgeRating
from models.snapshots import LabeledApp
from taxonomy.enums import AppleCategory, ApplePurpose, DataCategory, GoogleCategory, GooglePurpose, Platform
from taxonomy.tables import sorted_common_datatypes, sorted_common_purposes

DOWNLOAD_FLOOR = 1000
SEMI_POPULAR = 10_000
EXTREMELY_POPULAR = 1_000_000


class PopularityBucket(str, Enum):
    low = "low"
    semi = "semi"
    extreme = "extreme"


def popularity_bucket(downloads: int) -> PopularityBucket:
    if downloads > EXTREMELY_POPULAR:
        return PopularityBucket.extreme
    if downloads > SEMI_POPULAR:
        return PopularityBucket.semi
    return PopularityBucket.low


def apply_download_filter(records: Iterable[LabeledApp], floor: int = DOWNLOAD_FLOOR) -> list[LabeledApp]:
    """Drop Google apps below ``floor`` downloads, or without a download count. Apple apps pass."""
    kept, dropped = [], 0
    for app in records:
        rec = app.record
        if rec.platform is Platform.google and (rec.downloads is None or rec.downloads < floor):
            dropped += 1
            continue
        kept.append(app)
    if dropped:
        logger.info(f"➡ download filter dropped {dropped} google app(s) under {floor} downloads")
    return kept


# ---------- result types ----------

class Fraction(BaseModel):
    model_config = ConfigDict(frozen=True)

    numerator: int
    denominator: int
    value: float | None
    of: str

    @classmethod
    def of_counts(cls, numerator: int, denominator: int, of: str) -> "Fraction":
        return cls(numerator=numerator, denominator=denominator,
                   value=numerator / denominator if denominator else None, of=of)


class StratumStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    apps: int
    labeled: int
    fractions: dict[str, Fraction]


class HeatmapCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    datatype: str
    purpose: str
    inconsistent: int
    total: int
    value: float | None


class AggregateStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    corpus: dict[str, int]
    dimensions: dict[str, dict[str, StratumStats]]
    flags: dict[str, Fraction]
    label_categories: dict[str, dict[str, Fraction]]
    label_purposes: dict[str, dict[str, Fraction]]
    policy: dict[str, dict[str, Fraction]]
    cross: dict[str, Fraction]
    per_datatype: dict[str, Fraction]
    heatmap: tuple[HeatmapCell, ...]


# ---------- per-app predicates ----------

def _label_flags(app: LabeledApp) -> dict[str, bool]:
    """Label-derived booleans counted per stratum; denominators are labeled apps."""
    if app.platform is Platform.google:
        g = app.google_label
        return {
            "collects": g.collects,
            "collects_directly": bool(g.collected),
            "shares": bool(g.shared),
            "encrypts_in_transit": g.security.encrypted_in_transit is True,
            "deletion_option": g.security.data_deletion_option is True,
            "no_security_details": flag_no_security_details(g),
        }
    a = app.apple_label
    return {
        "collects": a.declares_data,
        "tracks": a.tracks,
        "links": a.links,
        "not_linked": bool(a.not_linked_entries),
    }


GOOGLE_METRICS = ("collects", "collects_directly", "shares", "encrypts_in_transit", "deletion_option",
                  "no_security_details")
APPLE_METRICS = ("collects", "tracks", "links", "not_linked")


def _stratum(apps: list[LabeledApp], metrics: tuple[str, ...]) -> StratumStats:
    labeled = [a for a in apps if a.label is not None]
    counts = defaultdict(int)
    for app in labeled:
        for name, value in _label_flags(app).items():
            if value:
                counts[name] += 1
    fractions = {"coverage": Fraction.of_counts(len(labeled), len(apps), "apps")}
    for name in metrics:
        fractions[name] = Fraction.of_counts(counts[name], len(labeled), "labeled_apps")
    return StratumStats(apps=len(apps), labeled=len(labeled), fractions=fractions)


def _metrics_for(apps: list[LabeledApp]) -> tuple[str, ...]:
    platforms = {a.platform for a in apps}
    if platforms == {Platform.apple}:
        return APPLE_METRICS
    if platforms == {Platform.google}:
        return GOOGLE_METRICS
    return ("collects",)


def _dimensions(apps: list[LabeledApp]) -> dict[str, dict[str, StratumStats]]:
    groups: dict[str, dict[str, list[LabeledApp]]] = {
        "platform": {p.value: [] for p in Platform},
        "popularity": {b.value: [] for b in PopularityBucket},
        "age_rating": {},
        "price_class": {},
    }
    for app in apps:
        rec = app.record
        groups["platform"][rec.platform.value].append(app)
        if rec.platform is Platform.google:
            groups["popularity"][popularity_bucket(rec.downloads).value].append(app)
        if rec.age_rating is not None and rec.age_rating is not AgeRating.Adults18:
            groups["age_rating"].setdefault(rec.age_rating.value, []).append(app)
        groups["price_class"].setdefault(f"{rec.platform.value}:{rec.price_class.value}", []).append(app)

    out = {}
    for dimension, strata in groups.items():
        out[dimension] = {}
        for key in sorted(strata):
            members = strata[key]
            if dimension == "platform":
                metrics = APPLE_METRICS if key == Platform.apple.value else GOOGLE_METRICS
            elif dimension == "popularity":
                metrics = GOOGLE_METRICS
            else:
                metrics = _metrics_for(members)
            out[dimension][key] = _stratum(members, metrics)
    return out


def _flags(apps: list[LabeledApp]) -> dict[str, Fraction]:
    labeled = [a for a in apps if a.platform is Platform.google and a.google_label is not None]
    with_permission = [a for a in labeled if a.record.requests_network_permission is not None]
    mismatches = defaultdict(int)
    for app in with_permission:
        mismatches[flag_encryption_permission_mismatch(app.record, app.google_label)] += 1
    return {
        "encrypt_without_collect": Fraction.of_counts(
            sum(flag_encrypt_without_collect(a.google_label) for a in labeled), len(labeled), "labeled_google_apps"),
        "no_security_details": Fraction.of_counts(
            sum(flag_no_security_details(a.google_label) for a in labeled), len(labeled), "labeled_google_apps"),
        "permission_without_encryption": Fraction.of_counts(
            mismatches[PermissionMismatch.permission_without_encryption], len(with_permission),
            "labeled_google_apps_with_permission_data"),
        "encryption_without_permission": Fraction.of_counts(
            mismatches[PermissionMismatch.encryption_without_permission], len(with_permission),
            "labeled_google_apps_with_permission_data"),
    }


HIGH_LEVEL_KEYS = {
    Platform.google: [
        (FindingLevel.high, Practice.DataCollection, Direction.in_label),
        (FindingLevel.high, Practice.DataCollection, Direction.in_policy),
        (FindingLevel.high, Practice.DataSharing, Direction.in_label),
        (FindingLevel.high, Practice.DataSharing, Direction.in_policy),
        (FindingLevel.security, Practice.Encryption, Direction.in_label),
        (FindingLevel.security, Practice.Encryption, Direction.in_policy),
        (FindingLevel.security, Practice.DataDeletion, Direction.in_label),
        (FindingLevel.security, Practice.DataDeletion, Direction.in_policy),
    ],
    Platform.apple: [
        (FindingLevel.high, Practice.DataLinkedToYou, Direction.in_label),
        (FindingLevel.high, Practice.DataLinkedToYou, Direction.in_policy),
        (FindingLevel.high, Practice.DataUsedToTrackYou, Direction.in_label),
        (FindingLevel.high, Practice.DataUsedToTrackYou, Direction.in_policy),
        (FindingLevel.high, Practice.DataNotLinkedToYou, Direction.in_policy),
        (FindingLevel.high, Practice.DataNotCollected, Direction.in_policy),
    ],
}
CATEGORY_PRACTICES = {
    Platform.google: (Practice.DataCollection, Practice.DataSharing),
    Platform.apple: (Practice.DataLinkedToYou, Practice.DataNotLinkedToYou),
}


def _policy(reports: list[ConsistencyReport]) -> dict[str, dict[str, Fraction]]:
    out = {}
    for platform in Platform:
        subset = [r for r in reports if r.platform is platform]
        n = len(subset)
        present = [{(f.level, f.practice, f.category, f.direction) for f in r.findings} for r in subset]
        table = {
            "any_in_label": Fraction.of_counts(
                sum(any(k[3] is Direction.in_label for k in p) for p in present), n, "checked_apps"),
            "any_in_policy": Fraction.of_counts(
                sum(any(k[3] is Direction.in_policy for k in p) for p in present), n, "checked_apps"),
        }
        for level, practice, direction in HIGH_LEVEL_KEYS[platform]:
            key = (level, practice, None, direction)
            table[f"{level.value}:{practice.value}:{direction.value}"] = Fraction.of_counts(
                sum(key in p for p in present), n, "checked_apps")
        for practice in CATEGORY_PRACTICES[platform]:
            for category in sorted(c.value for c in DataCategory):
                for direction in Direction:
                    key = (FindingLevel.category, practice, category, direction)
                    table[f"category:{practice.value}:{category}:{direction.value}"] = Fraction.of_counts(
                        sum(key in p for p in present), n, "checked_apps")
        out[platform.value] = table
    return out

# ---------- label-side categories and purposes ----------

LABEL_PRACTICES = {
    Platform.google: (Practice.DataCollection, Practice.DataSharing),
    Platform.apple: (Practice.DataLinkedToYou, Practice.DataNotLinkedToYou, Practice.DataUsedToTrackYou),
}
LABEL_VOCABULARY = {
    Platform.google: (GoogleCategory, GooglePurpose),
    Platform.apple: (AppleCategory, ApplePurpose),
}


def _label_entries(app: LabeledApp) -> dict[Practice, list[tuple[str, tuple[str, ...]]]]:
    """(category, purposes) of every declared entry, grouped by the label practice it sits under."""
    if app.platform is Platform.google:
        g = app.google_label
        return {
            Practice.DataCollection: [(e.category.value, tuple(p.value for p in e.purposes)) for e in g.collected],
            Practice.DataSharing: [(e.category.value, tuple(p.value for p in e.purposes)) for e in g.shared],
        }
    a = app.apple_label
    # tracking has no purpose level
    tracked = [(c.value, ()) for c in a.tracked_categories] + [(e.category.value, ()) for e in a.tracked_entries]
    return {
        Practice.DataLinkedToYou: [(e.category.value, (e.purpose.value,)) for e in a.linked_entries],
        Practice.DataNotLinkedToYou: [(e.category.value, (e.purpose.value,)) for e in a.not_linked_entries],
        Practice.DataUsedToTrackYou: tracked,
    }


FractionTables = dict[str, dict[str, Fraction]]


def _label_practices(apps: list[LabeledApp]) -> tuple[FractionTables, FractionTables]:
    """Share of labeled apps declaring each (practice, category) and each (practice, purpose)."""
    categories, purposes = {}, {}
    for platform in Platform:
        labeled = [a for a in apps if a.platform is platform and a.label is not None]
        category_counts, purpose_counts = defaultdict(int), defaultdict(int)
        for app in labeled:
            seen_categories, seen_purposes = set(), set()
            for practice, entries in _label_entries(app).items():
                for category, entry_purposes in entries:
                    seen_categories.add(f"{practice.value}:{category}")
                    seen_purposes.update(f"{practice.value}:{p}" for p in entry_purposes)
            for key in seen_categories:
                category_counts[key] += 1
            for key in seen_purposes:
                purpose_counts[key] += 1

        category_cls, purpose_cls = LABEL_VOCABULARY[platform]
        n = len(labeled)
        categories[platform.value] = {
            f"{practice.value}:{c}": Fraction.of_counts(category_counts[f"{practice.value}:{c}"], n, "labeled_apps")
            for practice in LABEL_PRACTICES[platform]
            for c in sorted(m.value for m in category_cls)
        }
        purposes[platform.value] = {
            f"{practice.value}:{p}": Fraction.of_counts(purpose_counts[f"{practice.value}:{p}"], n, "labeled_apps")
            for practice in LABEL_PRACTICES[platform] if practice is not Practice.DataUsedToTrackYou
            for p in sorted(m.value for m in purpose_cls)
        }
    return categories, purposes



def _cross(reports: list[CrossReport]) -> tuple[dict[str, Fraction], dict[str, Fraction], tuple[HeatmapCell, ...]]:
    n = len(reports)
    cross = {
        "collection_mismatch": Fraction.of_counts(sum(r.collection_mismatch for r in reports), n, "matched_pairs"),
        "datatype_inconsistent": Fraction.of_counts(sum(bool(r.datatype_findings) for r in reports), n,
                                                    "matched_pairs"),
        "pair_inconsistent": Fraction.of_counts(sum(bool(r.pair_findings) for r in reports), n, "matched_pairs"),
        "inconsistent": Fraction.of_counts(sum(not r.consistent for r in reports), n, "matched_pairs"),
    }

    dt_bad, dt_seen = defaultdict(int), defaultdict(int)
    pair_bad, pair_seen = defaultdict(int), defaultdict(int)
    for r in reports:
        for d in r.datatype_findings:
            dt_bad[d.value] += 1
        for d in r.observed_datatypes:
            dt_seen[d.value] += 1
        for d, p in r.pair_findings:
            pair_bad[(d.value, p.value)] += 1
        for d, p in r.observed_pairs:
            pair_seen[(d.value, p.value)] += 1

    per_datatype = {
        d.value: Fraction.of_counts(dt_bad[d.value], dt_seen[d.value], "pairs_declaring_datatype")
        for d in sorted_common_datatypes()
    }
    cells = []
    for d in sorted_common_datatypes():
        for p in sorted_common_purposes():
            key = (d.value, p.value)
            total = pair_seen[key]
            cells.append(HeatmapCell(datatype=d.value, purpose=p.value, inconsistent=pair_bad[key], total=total,
                                     value=pair_bad[key] / total if total else None))
    return cross, per_datatype, tuple(cells)


def aggregate(records: Iterable[LabeledApp], policy_reports: Iterable[ConsistencyReport] = (),
              cross_reports: Iterable[CrossReport] = (), download_floor: int = DOWNLOAD_FLOOR) -> AggregateStats:
    records = list(records)
    apps = sorted(apply_download_filter(records, download_floor), key=lambda a: (a.platform.value, a.app_id))
    policy_reports = sorted(policy_reports, key=lambda r: (r.platform.value, r.app_id))
    cross_reports = sorted(cross_reports, key=lambda r: (r.google_app_id, r.apple_app_id))

    corpus = {
        "records": len(records),
        "after_download_filter": len(apps),
        "google_apps": sum(a.platform is Platform.google for a in apps),
        "apple_apps": sum(a.platform is Platform.apple for a in apps),
        "policy_reports": len(policy_reports),
        "cross_reports": len(cross_reports),
    }
    cross, per_datatype, heatmap = _cross(cross_reports)
    label_categories, label_purposes = _label_practices(apps)
    return AggregateStats(
        corpus=corpus,
        dimensions=_dimensions(apps),
        flags=_flags(apps),
        label_categories=label_categories,
        label_purposes=label_purposes,
        policy=_policy(policy_reports),
        cross=cross,
        per_datatype=per_datatype,
        heatmap=heatmap,
    )
