"""Cross-listed app detection.

Apps with the same normalized name on both stores become candidate pairs. A pair
is accepted at the first tier that fires (identical policy URL, same policy
domain, same developer-website domain) when it is the best option for both sides.
Any app with more than one candidate at its best tier is dropped together with all
of its candidates and reported as ambiguous.
"""

import re
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Iterable

from loguru import logger
from pydantic import BaseModel, ConfigDict

from matcher.domains import first_level_domain, normalize_url
from models.apps import AppRecord
from taxonomy.enums import Platform
from utils.errors import MalformedRecord, NoHost

_SPACE_RE = re.compile(r"\s+")


class MatchTier(str, Enum):
    policy_url_exact = "policy_url_exact"
    policy_domain = "policy_domain"
    developer_domain = "developer_domain"


TIER_ORDER = (MatchTier.policy_url_exact, MatchTier.policy_domain, MatchTier.developer_domain)
_RANK = {t: i for i, t in enumerate(TIER_ORDER)}


class AmbiguityReason(str, Enum):
    multiple_candidates = "multiple_candidates"
    partner_ambiguous = "partner_ambiguous"


class MatchResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    google_app_id: str
    apple_app_id: str
    tier: MatchTier
    evidence: tuple[str, str]


class AmbiguityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    platform: Platform
    app_id: str
    tier: MatchTier
    candidates: tuple[str, ...]
    reason: AmbiguityReason


class MatchOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    matches: tuple[MatchResult, ...] = ()
    ambiguous: tuple[AmbiguityReport, ...] = ()


def normalize_name(name: str) -> str:
    return _SPACE_RE.sub(" ", (name or "").casefold()).strip()


def _safe(fn, url: str | None) -> str | None:
    if not url:
        return None
    try:
        return fn(url)
    except NoHost:
        return None


def pair_tier(g: AppRecord, a: AppRecord) -> tuple[MatchTier, tuple[str, str]] | None:
    """First tier at which the two records agree, with the compared strings."""
    g_url, a_url = _safe(normalize_url, g.policy_url), _safe(normalize_url, a.policy_url)
    if g_url and g_url == a_url:
        return MatchTier.policy_url_exact, (g_url, a_url)
    g_dom, a_dom = _safe(first_level_domain, g.policy_url), _safe(first_level_domain, a.policy_url)
    if g_dom and g_dom == a_dom:
        return MatchTier.policy_domain, (g.policy_url, a.policy_url)
    g_dev, a_dev = _safe(first_level_domain, g.developer_website), _safe(first_level_domain, a.developer_website)
    if g_dev and g_dev == a_dev:
        return MatchTier.developer_domain, (g.developer_website, a.developer_website)
    return None


def _match_bucket(google: list[AppRecord], apple: list[AppRecord]) -> tuple[list[MatchResult], list[AmbiguityReport]]:
    edges: dict[tuple[str, str], tuple[MatchTier, tuple[str, str]]] = {}
    for g in google:
        for a in apple:
            hit = pair_tier(g, a)
            if hit is not None:
                edges[(g.app_id, a.app_id)] = hit

    best: dict[tuple[Platform, str], int] = {}
    for (g_id, a_id), (tier, _) in edges.items():
        for key in ((Platform.google, g_id), (Platform.apple, a_id)):
            best[key] = min(best.get(key, len(TIER_ORDER)), _RANK[tier])

    at_best: dict[tuple[Platform, str], list[str]] = defaultdict(list)
    for (g_id, a_id), (tier, _) in edges.items():
        rank = _RANK[tier]
        if best[(Platform.google, g_id)] == rank:
            at_best[(Platform.google, g_id)].append(a_id)
        if best[(Platform.apple, a_id)] == rank:
            at_best[(Platform.apple, a_id)].append(g_id)

    ambiguous = {key for key, partners in at_best.items() if len(partners) > 1}
    other = {Platform.google: Platform.apple, Platform.apple: Platform.google}

    reports = []
    for key, partners in at_best.items():
        platform, app_id = key
        tier = TIER_ORDER[best[key]]
        if key in ambiguous:
            reports.append(AmbiguityReport(platform=platform, app_id=app_id, tier=tier,
                                           candidates=tuple(sorted(partners)),
                                           reason=AmbiguityReason.multiple_candidates))
        elif any((other[platform], p) in ambiguous for p in partners):
            reports.append(AmbiguityReport(platform=platform, app_id=app_id, tier=tier,
                                           candidates=tuple(sorted(partners)),
                                           reason=AmbiguityReason.partner_ambiguous))

    matches = []
    for (g_id, a_id), (tier, evidence) in edges.items():
        g_key, a_key = (Platform.google, g_id), (Platform.apple, a_id)
        if g_key in ambiguous or a_key in ambiguous:
            continue
        if best[g_key] == _RANK[tier] == best[a_key]:
            matches.append(MatchResult(google_app_id=g_id, apple_app_id=a_id, tier=tier, evidence=evidence))
    return matches, reports


def _check_unique(records: list[AppRecord], platform: Platform) -> None:
    seen = set()
    for r in records:
        if r.platform is not platform:
            raise MalformedRecord(f"{r.platform.value}:{r.app_id} passed as a {platform.value} record")
        if r.app_id in seen:
            raise MalformedRecord(f"{platform.value}:{r.app_id} listed twice")
        seen.add(r.app_id)


def match_apps(google: Iterable[AppRecord], apple: Iterable[AppRecord], jobs: int = 1) -> MatchOutcome:
    """Tiered pseudo-identifier matching; output sorted by google app id."""
    google = sorted(google, key=lambda r: r.app_id)
    apple = sorted(apple, key=lambda r: r.app_id)
    _check_unique(google, Platform.google)
    _check_unique(apple, Platform.apple)

    buckets: dict[str, tuple[list[AppRecord], list[AppRecord]]] = defaultdict(lambda: ([], []))
    for r in google:
        if normalize_name(r.name):
            buckets[normalize_name(r.name)][0].append(r)
    for r in apple:
        if normalize_name(r.name):
            buckets[normalize_name(r.name)][1].append(r)
    work = [b for _, b in sorted(buckets.items()) if b[0] and b[1]]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda b: _match_bucket(*b), work))
    else:
        results = [_match_bucket(*b) for b in work]

    matches = sorted((m for ms, _ in results for m in ms), key=lambda m: (m.google_app_id, m.apple_app_id))
    reports = sorted((r for _, rs in results for r in rs), key=lambda r: (r.platform.value, r.app_id))
    counts = defaultdict(int)
    for m in matches:
        counts[m.tier.value] += 1
    logger.info(f"✔ {len(matches)} cross-listed pairs {dict(sorted(counts.items()))}, {len(reports)} ambiguous apps")
    return MatchOutcome(matches=tuple(matches), ambiguous=tuple(reports))
