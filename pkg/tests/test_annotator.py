import json
import random

import pytest

from annotator.backends import (
    KeywordBackend,
    NullBackend,
    default_keyword_backend,
    export_annotations,
    load_external_annotations,
    resolve_backend,
)
from annotator.practices import PracticeSet, annotate, annotate_many, extract_practices, load_practices, practices_row
from models.policies import PolicyDocument, Segment
from taxonomy.enums import DataCategory, TaxonomyPurpose
from taxonomy.tags import TagKind, parse_tag_label, tag
from tests.factories import tagged_doc
from utils.errors import BackendFailure, MalformedAnnotationFile, UnknownTagClass, UsageError

ALL_LABELS = (
    ["FirstPartyCollectionShare", "ThirdPartySharingCollection", "Identifiability(identifiable)",
     "Identifiability(anonymous)", "DoesDoesNot(does)", "DoesDoesNot(does_not)", "EncryptionInTransit",
     "DataDeletionOption"]
    + [f"DataCategory({c.value})" for c in DataCategory]
    + [f"Purpose({p.value})" for p in TaxonomyPurpose]
)


def doc_of(*texts: str, url: str = "https://example.com/privacy") -> PolicyDocument:
    segments = tuple(Segment(index=i, text=t) for i, t in enumerate(texts))
    return PolicyDocument(source_url=url, language="en", word_count=sum(s.word_count for s in segments),
                          segments=segments)


class TestAnnotate:

    def test_null_backend_clears(self):
        doc = tagged_doc(["EncryptionInTransit"], [])
        out = annotate(doc, NullBackend())
        assert all(s.annotations == frozenset() for s in out.segments)
        assert [s.text for s in out.segments] == [s.text for s in doc.segments]

    def test_keyword_share_location(self):
        out = annotate(doc_of("We share your location with advertisers"), default_keyword_backend())
        labels = {t.label for t in out.segments[0].annotations}
        assert {"ThirdPartySharingCollection", "DataCategory(Location)"} <= labels

    def test_links_do_not_fire(self):
        backend = default_keyword_backend()
        text = "Questions? Write to us at https://example.com/contact or visit www.example.com/location today."
        labels = {t.label for t in backend.tag(Segment(index=0, text=text))}
        assert "EncryptionInTransit" not in labels
        assert "DataCategory(Location)" not in labels

    @pytest.mark.parametrize("text", [
        "Data is sent to our servers over TLS.",
        "Payments are protected with SSL encryption.",
        "Messages are encrypted in transit.",
    ])
    def test_encryption_phrases(self, text):
        labels = {t.label for t in default_keyword_backend().tag(Segment(index=0, text=text))}
        assert "EncryptionInTransit" in labels

    def test_keyword_replaces_existing(self):
        doc = tagged_doc(["DataDeletionOption"])
        out = annotate(doc, default_keyword_backend())
        assert out.segments[0].annotations == frozenset()

    def test_deterministic(self):
        doc = doc_of("We collect your email address and device identifier.",
                     "We do not sell your personal information to third parties.",
                     "All traffic is encrypted in transit using TLS.")
        backend = default_keyword_backend()
        assert annotate(doc, backend) == annotate(doc, backend)
        assert annotate_many([doc] * 4, backend, jobs=3) == [annotate(doc, backend)] * 4

    def test_backend_failure_names_segment(self):
        class Broken:
            name, version = "broken", "0"

            def tag(self, segment, doc_url):
                if segment.index == 1:
                    raise RuntimeError("model crashed")
                return frozenset()

        with pytest.raises(BackendFailure) as exc:
            annotate(doc_of("one", "two"), Broken())
        assert exc.value.segment_index == 1
        assert "broken" in exc.value.backend

    def test_custom_lexicon(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text(json.dumps({"version": "t", "classes": {"DataCategory(Calendar)": ["agenda"]}}))
        backend = KeywordBackend(path)
        assert backend.version == "t"
        assert backend.tag(Segment(index=0, text="Your Agenda entries")) == {tag(TagKind.DataCategory, "Calendar")}

    def test_resolve_backend(self, tmp_path):
        assert resolve_backend("null").name == "null"
        assert resolve_backend("keyword") is default_keyword_backend()
        with pytest.raises(UsageError):
            resolve_backend("bert")


class TestExternalAnnotations:

    def write(self, path, *rows):
        path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
        return path

    def test_replay(self, tmp_path):
        path = self.write(tmp_path / "ann.jsonl", {"doc_url": "https://a.example/p", "segment_index": 0,
                                                    "tags": [{"class": "EncryptionInTransit", "score": 0.9}]})
        backend = load_external_annotations(path)
        doc = doc_of("first", "second", url="https://a.example/p")
        assert backend.tag(doc.segments[0], doc.source_url) == {tag(TagKind.EncryptionInTransit, score=0.9)}
        assert backend.tag(doc.segments[1], doc.source_url) == frozenset()
        assert backend.tag(doc.segments[0], "https://other.example/") == frozenset()

    def test_unknown_class(self, tmp_path):
        path = self.write(tmp_path / "ann.jsonl", {"doc_url": "u", "segment_index": 0,
                                                    "tags": [{"class": "Foo", "score": 0.5}]})
        with pytest.raises(UnknownTagClass):
            load_external_annotations(path)

    @pytest.mark.parametrize("row", [
        {"segment_index": 0, "tags": []},
        {"doc_url": "u", "segment_index": -1, "tags": []},
        {"doc_url": "u", "segment_index": "0", "tags": []},
        {"doc_url": "u", "segment_index": 0, "tags": {}},
        {"doc_url": "u", "segment_index": 0, "tags": [{"score": 0.5}]},
        {"doc_url": "u", "segment_index": 0, "tags": [{"class": "EncryptionInTransit", "score": 2}]},
    ])
    def test_malformed(self, tmp_path, row):
        with pytest.raises(MalformedAnnotationFile):
            load_external_annotations(self.write(tmp_path / "ann.jsonl", row))

    def test_not_json(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text("{not json\n", encoding="utf-8")
        with pytest.raises(MalformedAnnotationFile):
            load_external_annotations(path)

    def test_export_reload(self, tmp_path):
        rng = random.Random(7)
        docs = []
        for d in range(100):
            segments = []
            for i in range(10):
                labels = rng.sample(ALL_LABELS, rng.randint(0, 5))
                tags = frozenset(parse_tag_label(lbl, round(rng.random(), 3)) for lbl in labels)
                segments.append(Segment(index=i, text=f"segment {i}", annotations=tags))
            docs.append(PolicyDocument(source_url=f"https://d{d}.example/privacy", language="en",
                                       word_count=20, segments=tuple(segments)))
        path = tmp_path / "export.jsonl"
        assert export_annotations(docs, path) == 1000

        backend = load_external_annotations(path)
        assert len(backend) == 1000
        for doc in docs:
            assert annotate(doc, backend) == doc


def brute_force_practices(doc: PolicyDocument, threshold: float) -> PracticeSet:
    found = {"data_collection": set(), "data_sharing": set(), "linked": set(), "not_linked": set(),
             "purposes": set()}
    flags = {"encryption_in_transit": False, "data_deletion_option": False, "tracking_evidence": False}
    for seg in doc.segments:
        labels = {t.label for t in seg.annotations if t.score >= threshold}
        if "DoesDoesNot(does_not)" in labels:
            continue
        first = "FirstPartyCollectionShare" in labels
        third = "ThirdPartySharingCollection" in labels
        for c in DataCategory:
            if f"DataCategory({c.value})" not in labels:
                continue
            if first:
                found["data_collection"].add(c)
            if third:
                found["data_sharing"].add(c)
            if (first or third) and "Identifiability(identifiable)" in labels:
                found["linked"].add(c)
            if (first or third) and "Identifiability(anonymous)" in labels:
                found["not_linked"].add(c)
        for p in TaxonomyPurpose:
            if (first or third) and f"Purpose({p.value})" in labels:
                found["purposes"].add(p)
        if "EncryptionInTransit" in labels:
            flags["encryption_in_transit"] = True
        if "DataDeletionOption" in labels:
            flags["data_deletion_option"] = True
        if third and "Purpose(AdvertisingOrMarketing)" in labels:
            flags["tracking_evidence"] = True
    return PracticeSet(**{k: frozenset(v) for k, v in found.items()}, **flags)


def random_doc(rng: random.Random, vocabulary=ALL_LABELS) -> PolicyDocument:
    segments = []
    for _ in range(rng.randint(0, 50)):
        labels = rng.sample(vocabulary, rng.randint(0, 6))
        segments.append([(lbl, rng.choice([0.2, 0.49, 0.5, 0.8, 1.0])) for lbl in labels])
    return tagged_doc(*segments)


class TestExtractPractices:

    def test_empty(self):
        practices = extract_practices(tagged_doc([], []))
        assert practices == PracticeSet()
        assert not practices.encryption_in_transit and not practices.data_deletion_option

    def test_first_party_identifiable(self):
        doc = tagged_doc(["DataCategory(Location)", "FirstPartyCollectionShare", "Identifiability(identifiable)"])
        practices = extract_practices(doc)
        assert practices.data_collection == {DataCategory.Location}
        assert practices.linked == {DataCategory.Location}
        assert practices.data_sharing == frozenset()

    def test_does_not_excludes_segment(self):
        doc = tagged_doc(["DataCategory(Contacts)", "ThirdPartySharingCollection", "DoesDoesNot(does_not)"])
        assert extract_practices(doc).data_sharing == frozenset()

    def test_categories_need_same_segment(self):
        doc = tagged_doc(["DataCategory(Contacts)"], ["FirstPartyCollectionShare"])
        assert extract_practices(doc).data_collection == frozenset()

    def test_tracking_evidence(self):
        doc = tagged_doc(["ThirdPartySharingCollection", "Purpose(AdvertisingOrMarketing)"])
        assert extract_practices(doc).tracking_evidence
        doc = tagged_doc(["FirstPartyCollectionShare", "Purpose(AdvertisingOrMarketing)"])
        assert not extract_practices(doc).tracking_evidence

    def test_threshold_filters_scores(self):
        doc = tagged_doc([("DataCategory(Location)", 0.4), "FirstPartyCollectionShare"])
        assert extract_practices(doc).data_collection == frozenset()
        assert extract_practices(doc, threshold=0.4).data_collection == {DataCategory.Location}

    def test_matches_brute_force(self):
        rng = random.Random(2023)
        for _ in range(200):
            doc = random_doc(rng)
            threshold = rng.choice([0.0, 0.5, 0.9])
            assert extract_practices(doc, threshold) == brute_force_practices(doc, threshold)

    def test_monotone_in_tags(self):
        rng = random.Random(11)
        positive = [lbl for lbl in ALL_LABELS if lbl != "DoesDoesNot(does_not)"]
        for _ in range(100):
            doc = random_doc(rng)
            if not doc.segments:
                continue
            before = extract_practices(doc)
            i = rng.randrange(len(doc.segments))
            if any(t.label == "DoesDoesNot(does_not)" for t in doc.segments[i].annotations):
                continue
            extra = parse_tag_label(rng.choice(positive), 1.0)
            segments = list(doc.segments)
            segments[i] = segments[i].model_copy(update={"annotations": segments[i].annotations | {extra}})
            after = extract_practices(doc.model_copy(update={"segments": tuple(segments)}))
            for field in ("data_collection", "data_sharing", "linked", "not_linked", "purposes"):
                assert getattr(before, field) <= getattr(after, field)
            for flag in ("encryption_in_transit", "data_deletion_option", "tracking_evidence"):
                assert getattr(before, flag) <= getattr(after, flag)

    def test_monotone_in_threshold(self):
        # a does_not tag falling below the threshold releases its segment, so keep negation out
        positive = [lbl for lbl in ALL_LABELS if lbl != "DoesDoesNot(does_not)"]
        rng = random.Random(5)
        for _ in range(100):
            doc = random_doc(rng, positive)
            low, high = extract_practices(doc, 0.3), extract_practices(doc, 0.7)
            for field in ("data_collection", "data_sharing", "linked", "not_linked", "purposes"):
                assert getattr(high, field) <= getattr(low, field)

    def test_practices_file(self, tmp_path):
        doc = tagged_doc(["DataCategory(Location)", "FirstPartyCollectionShare", "EncryptionInTransit"])
        practices = extract_practices(doc)
        path = tmp_path / "practices.jsonl"
        path.write_text(json.dumps(practices_row(doc.source_url, practices)) + "\n", encoding="utf-8")
        assert load_practices(path) == {doc.source_url: practices}
