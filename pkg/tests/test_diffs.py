import datetime as dt

import pytest

from consistency.diffs import ChangeClass, diff_pair, diff_snapshots
from models.snapshots import build_snapshot, load_snapshot, save_snapshot
from tests.factories import g_entry, google_app, google_label
from utils.errors import UnorderedSnapshots, UsageError

LOCATION = google_label(collected=[g_entry("PreciseLocation", "AppFunctionality")])
EMPTY = google_label(encrypted=True)
CONTACTS = google_label(shared=[g_entry("Contacts", "Analytics")])


def snap(day: int, **labels):
    """``labels`` maps app id to a label; the value ``...`` lists the app without a label."""
    apps = [google_app(app_id, None if label is ... else label) for app_id, label in labels.items()]
    return build_snapshot(dt.date(2023, 1, day), apps)


def test_identical_snapshots():
    report = diff_snapshots([snap(1, a=LOCATION, b=...), snap(2, a=LOCATION, b=...)])
    assert report.findings == ()


def test_label_removed():
    report = diff_snapshots([snap(1, a=LOCATION), snap(2, a=...)])
    assert report.by_app() == {"a": {ChangeClass.label_removed}}


def test_app_removed_is_not_label_removed():
    report = diff_snapshots([snap(1, a=LOCATION, b=LOCATION), snap(2, a=LOCATION)])
    assert report.by_app() == {"b": {ChangeClass.app_removed}}


def test_practices_changed_b():
    report = diff_snapshots([snap(1, a=EMPTY), snap(2, a=LOCATION)])
    assert report.by_app() == {"a": {ChangeClass.practices_changed_B}}


def test_practices_changed_c_and_other():
    report = diff_snapshots([snap(1, a=LOCATION, b=LOCATION), snap(2, a=EMPTY, b=CONTACTS)])
    assert report.by_app() == {"a": {ChangeClass.practices_changed_C}, "b": {ChangeClass.practices_changed_other}}


def test_added():
    report = diff_snapshots([snap(1, a=...), snap(2, a=LOCATION, b=...)])
    assert report.by_app() == {"a": {ChangeClass.label_added}, "b": {ChangeClass.app_added}}


def test_needs_two_snapshots():
    with pytest.raises(UsageError):
        diff_snapshots([snap(1, a=LOCATION)])


@pytest.mark.parametrize("days", [(2, 1), (1, 1)])
def test_order_enforced(days):
    with pytest.raises(UnorderedSnapshots):
        diff_snapshots([snap(days[0], a=LOCATION), snap(days[1], a=LOCATION)])


class TestSeries:

    @pytest.fixture
    def series(self):
        return [
            snap(1, a=EMPTY, b=LOCATION, c=..., d=LOCATION),
            snap(2, a=LOCATION, b=LOCATION, c=CONTACTS, d=...),
            snap(3, a=LOCATION, b=EMPTY, c=CONTACTS),
            snap(4, a=EMPTY, b=..., c=CONTACTS, e=LOCATION),
        ]

    def test_union_of_pairs(self, series):
        report = diff_snapshots(series)
        pairwise = [f for a, b in zip(series, series[1:]) for f in diff_pair(a, b)]
        assert sorted(report.findings, key=lambda f: (f.from_date, f.app_id)) == list(report.findings)
        assert set(report.findings) == set(pairwise)
        assert report.by_app() == {
            "a": {ChangeClass.practices_changed_B, ChangeClass.practices_changed_C},
            "b": {ChangeClass.practices_changed_C, ChangeClass.label_removed},
            "c": {ChangeClass.label_added},
            "d": {ChangeClass.label_removed, ChangeClass.app_removed},
            "e": {ChangeClass.app_added},
        }

    def test_b_and_c_exclusive_per_pair(self, series):
        for f in diff_snapshots(series).findings:
            assert not {ChangeClass.practices_changed_B, ChangeClass.practices_changed_C} <= set(f.changes)

    def test_counts(self, series):
        assert diff_snapshots(series).counts() == {
            "app_added": 1, "app_removed": 1, "label_added": 1, "label_removed": 2,
            "practices_changed_B": 1, "practices_changed_C": 2,
        }

    def test_survives_disk(self, series, tmp_path):
        loaded = []
        for i, s in enumerate(series):
            path = tmp_path / f"snap{i}.jsonl"
            save_snapshot(path, s)
            loaded.append(load_snapshot(path))
        assert diff_snapshots(loaded) == diff_snapshots(series)
