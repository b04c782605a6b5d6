"""Apply a backend to documents and fold segment tags into a PracticeSet."""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Iterable

from pydantic import BaseModel, ConfigDict

from annotator.backends import AnnotatorBackend
from models.labels import SortedFrozenSet
from models.policies import PolicyDocument, Segment
from taxonomy.enums import DataCategory, TaxonomyPurpose
from taxonomy.tags import ANONYMOUS, DOES_NOT, IDENTIFIABLE, TagKind, TaxonomyTag
from utils.errors import BackendFailure, MalformedRecord
from utils.json_utils import read_jsonl

DEFAULT_THRESHOLD = 0.5


class PracticeSet(BaseModel):
    """What a policy says it does, at the granularity the labels speak."""

    model_config = ConfigDict(frozen=True)

    data_collection: SortedFrozenSet[DataCategory] = frozenset()
    data_sharing: SortedFrozenSet[DataCategory] = frozenset()
    linked: SortedFrozenSet[DataCategory] = frozenset()
    not_linked: SortedFrozenSet[DataCategory] = frozenset()
    purposes: SortedFrozenSet[TaxonomyPurpose] = frozenset()
    encryption_in_transit: bool = False
    data_deletion_option: bool = False
    tracking_evidence: bool = False


def annotate(doc: PolicyDocument, backend: AnnotatorBackend) -> PolicyDocument:
    """Copy of ``doc`` whose segments carry exactly the backend's tags."""
    segments = []
    for seg in doc.segments:
        try:
            tags = frozenset(backend.tag(seg, doc.source_url))
        except Exception as e:
            raise BackendFailure(f"{backend.name}@{backend.version}", seg.index, e) from e
        segments.append(seg.model_copy(update={"annotations": tags}))
    return doc.model_copy(update={"segments": tuple(segments)})


def annotate_many(docs: Iterable[PolicyDocument], backend: AnnotatorBackend, jobs: int = 1) -> list[PolicyDocument]:
    docs = list(docs)
    if jobs <= 1:
        return [annotate(d, backend) for d in docs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda d: annotate(d, backend), docs))


def _active(segment: Segment, threshold: float) -> list[TaxonomyTag]:
    return [t for t in segment.annotations if t.score >= threshold]


def extract_practices(doc: PolicyDocument, threshold: float = DEFAULT_THRESHOLD) -> PracticeSet:
    """A practice is present when at least one segment supports it.

    Only tags scoring at least ``threshold`` count, and a segment tagged
    DoesDoesNot(does_not) contributes nothing.
    """
    collection: set[DataCategory] = set()
    sharing: set[DataCategory] = set()
    linked: set[DataCategory] = set()
    not_linked: set[DataCategory] = set()
    purposes: set[TaxonomyPurpose] = set()
    encryption = deletion = tracking = False

    for seg in doc.segments:
        tags = _active(seg, threshold)
        values = {(t.kind, t.value) for t in tags}
        if (TagKind.DoesDoesNot, DOES_NOT) in values:
            continue
        kinds = {k for k, _ in values}
        categories = {DataCategory(v) for k, v in values if k is TagKind.DataCategory}
        seg_purposes = {TaxonomyPurpose(v) for k, v in values if k is TagKind.Purpose}
        first = TagKind.FirstPartyCollectionShare in kinds
        third = TagKind.ThirdPartySharingCollection in kinds

        if first:
            collection |= categories
        if third:
            sharing |= categories
        if first or third:
            if (TagKind.Identifiability, IDENTIFIABLE) in values:
                linked |= categories
            if (TagKind.Identifiability, ANONYMOUS) in values:
                not_linked |= categories
            purposes |= seg_purposes
        encryption = encryption or TagKind.EncryptionInTransit in kinds
        deletion = deletion or TagKind.DataDeletionOption in kinds
        if third and TaxonomyPurpose.AdvertisingOrMarketing in seg_purposes:
            tracking = True

    return PracticeSet(
        data_collection=frozenset(collection),
        data_sharing=frozenset(sharing),
        linked=frozenset(linked),
        not_linked=frozenset(not_linked),
        purposes=frozenset(purposes),
        encryption_in_transit=encryption,
        data_deletion_option=deletion,
        tracking_evidence=tracking,
    )


def practices_row(source_url: str, practices: PracticeSet) -> dict[str, Any]:
    return {"source_url": source_url, "practices": practices.model_dump(mode="json")}


def load_practices(path: str | Path) -> dict[str, PracticeSet]:
    """``source_url`` → PracticeSet from a file written with ``practices_row``."""
    out: dict[str, PracticeSet] = {}
    for i, row in enumerate(read_jsonl(path), start=1):
        url = row.get("source_url")
        if not isinstance(url, str) or not isinstance(row.get("practices"), dict):
            raise MalformedRecord(f"{path}:{i}: expected {{source_url, practices}}")
        out[url] = PracticeSet.model_validate(row["practices"])
    return out
