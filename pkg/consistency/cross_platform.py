"""Google versus Apple label comparison for a cross-listed app.

Both labels are projected into the common space: the Apple datatypes that some
Google datatype maps to, and the four common purposes. Datatypes are compared as
sets, then (datatype, purpose) pairs. Apple tracking entries have no purpose, so
they only take part in the datatype comparison.
"""

from pydantic import BaseModel, ConfigDict

from models.labels import AppleLabel, GoogleLabel
from taxonomy.enums import AppleDatatype, CommonPurpose
from taxonomy.tables import CrossPlatformMap, cross_platform_map

Pair = tuple[AppleDatatype, CommonPurpose]


def _pair_key(pair: Pair) -> tuple[str, str]:
    return pair[0].value, pair[1].value


class CrossReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    google_app_id: str = ""
    apple_app_id: str = ""
    collection_mismatch: bool = False
    datatype_findings: tuple[AppleDatatype, ...] = ()
    pair_findings: tuple[Pair, ...] = ()
    # what either label declares, for per-datatype and per-pair normalization
    observed_datatypes: tuple[AppleDatatype, ...] = ()
    observed_pairs: tuple[Pair, ...] = ()
    consistent: bool = True


def check_cross_collection(g: GoogleLabel, a: AppleLabel) -> bool:
    """True when exactly one of the two labels says the app collects data."""
    return g.collects != a.collects


def google_projection(g: GoogleLabel,
                      mapping: CrossPlatformMap | None = None) -> tuple[set[AppleDatatype], set[Pair]]:
    mapping = mapping or cross_platform_map()
    datatypes, pairs = set(), set()
    for entry in g.collected | g.shared:
        dt = mapping.datatype_map.get(entry.datatype)
        if dt is None:
            continue
        datatypes.add(dt)
        for p in entry.purposes:
            cp = mapping.purpose_map.get(p)
            if cp is not None:
                pairs.add((dt, cp))
    return datatypes, pairs


def apple_projection(a: AppleLabel,
                     mapping: CrossPlatformMap | None = None) -> tuple[set[AppleDatatype], set[Pair]]:
    mapping = mapping or cross_platform_map()
    common_datatypes = mapping.common_datatypes
    datatypes, pairs = set(), set()
    for entry in a.linked_entries | a.not_linked_entries:
        if entry.datatype not in common_datatypes:
            continue
        datatypes.add(entry.datatype)
        cp = mapping.apple_purpose_map.get(entry.purpose)
        if cp is not None:
            pairs.add((entry.datatype, cp))
    for entry in a.tracked_entries:
        if entry.datatype in common_datatypes:
            datatypes.add(entry.datatype)
    return datatypes, pairs


def check_cross_pairs(g: GoogleLabel, a: AppleLabel, google_app_id: str = "", apple_app_id: str = "",
                      mapping: CrossPlatformMap | None = None) -> CrossReport:
    """Symmetric differences of the two projections; ``mapping`` defaults to the bundled tables."""
    mapping = mapping or cross_platform_map()
    g_types, g_pairs = google_projection(g, mapping)
    a_types, a_pairs = apple_projection(a, mapping)
    datatype_findings = g_types ^ a_types
    pair_findings = g_pairs ^ a_pairs
    mismatch = check_cross_collection(g, a)
    return CrossReport(
        google_app_id=google_app_id,
        apple_app_id=apple_app_id,
        collection_mismatch=mismatch,
        datatype_findings=tuple(sorted(datatype_findings, key=lambda d: d.value)),
        pair_findings=tuple(sorted(pair_findings, key=_pair_key)),
        observed_datatypes=tuple(sorted(g_types | a_types, key=lambda d: d.value)),
        observed_pairs=tuple(sorted(g_pairs | a_pairs, key=_pair_key)),
        consistent=not (mismatch or datatype_findings or pair_findings),
    )
