"""Snapshot-to-snapshot label changes."""

import datetime as dt
from collections import Counter, defaultdict
from enum import Enum
from typing import Sequence

from pydantic import BaseModel, ConfigDict

from models.labels import GoogleLabel
from models.snapshots import Snapshot
from utils.errors import UnorderedSnapshots, UsageError


class ChangeClass(str, Enum):
    label_added = "label_added"
    label_removed = "label_removed"
    app_removed = "app_removed"
    app_added = "app_added"
    # nothing collected or shared → something
    practices_changed_B = "practices_changed_B"
    # something collected or shared → nothing
    practices_changed_C = "practices_changed_C"
    practices_changed_other = "practices_changed_other"


class DiffFinding(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    from_date: dt.date
    to_date: dt.date
    changes: tuple[ChangeClass, ...]


class DiffReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    findings: tuple[DiffFinding, ...] = ()

    def by_app(self) -> dict[str, frozenset[ChangeClass]]:
        """Union of changes per app across every adjacent pair."""
        out: dict[str, set[ChangeClass]] = defaultdict(set)
        for f in self.findings:
            out[f.app_id].update(f.changes)
        return {k: frozenset(v) for k, v in sorted(out.items())}

    def counts(self) -> dict[str, int]:
        c = Counter(ch.value for f in self.findings for ch in f.changes)
        return dict(sorted(c.items()))


def _label_change(before: GoogleLabel | None, after: GoogleLabel | None) -> ChangeClass | None:
    if before is None and after is None:
        return None
    if before is None:
        return ChangeClass.label_added
    if after is None:
        return ChangeClass.label_removed
    if before == after:
        return None
    if not before.collects and after.collects:
        return ChangeClass.practices_changed_B
    if before.collects and not after.collects:
        return ChangeClass.practices_changed_C
    return ChangeClass.practices_changed_other


def diff_pair(earlier: Snapshot, later: Snapshot) -> list[DiffFinding]:
    findings = []
    for app_id in sorted(set(earlier.entries) | set(later.entries)):
        before, after = earlier.entries.get(app_id), later.entries.get(app_id)
        if after is None:
            change = ChangeClass.app_removed
        elif before is None:
            change = ChangeClass.app_added
        else:
            change = _label_change(before.google_label, after.google_label)
        if change is not None:
            findings.append(DiffFinding(app_id=app_id, from_date=earlier.captured_at,
                                        to_date=later.captured_at, changes=(change,)))
    return findings


def diff_snapshots(series: Sequence[Snapshot]) -> DiffReport:
    """Changes for every adjacent pair of a series ordered by capture date."""
    if len(series) < 2:
        raise UsageError("diff needs at least two snapshots")
    for a, b in zip(series, series[1:]):
        if b.captured_at <= a.captured_at:
            raise UnorderedSnapshots(f"snapshot {b.captured_at} does not come after {a.captured_at}")
    findings = []
    for a, b in zip(series, series[1:]):
        findings.extend(diff_pair(a, b))
    return DiffReport(findings=tuple(sorted(findings, key=lambda f: (f.from_date, f.app_id))))
