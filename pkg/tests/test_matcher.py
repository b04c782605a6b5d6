import random

import pytest

from matcher.domains import (
    configure_suffix_list,
    first_level_domain,
    normalize_url,
    suffix_list_source,
    tldextract_version,
)
from matcher.linker import AmbiguityReason, MatchTier, match_apps, normalize_name, pair_tier
from models.apps import AppRecord
from taxonomy.enums import Platform
from tests.factories import apple_record, google_record
from utils.errors import MalformedRecord, NoHost


class TestDomains:

    @pytest.mark.parametrize("url, expected", [
        ("https://example.com/privacy", "example.com"),
        ("https://app.foo.example.co.uk/p?x=1", "example.co.uk"),
        ("https://EXAMPLE.com:8080/", "example.com"),
        ("http://www.Example.org.", "example.org"),
        ("http://192.168.0.1/privacy", "192.168.0.1"),
    ])
    def test_first_level_domain(self, url, expected):
        assert first_level_domain(url) == expected

    @pytest.mark.parametrize("url", ["mailto:privacy@example.com", "/privacy", "", "example.com/privacy"])
    def test_no_host(self, url):
        with pytest.raises(NoHost):
            first_level_domain(url)

    def test_normalize_url(self):
        assert normalize_url("HTTPS://Example.COM:443/privacy/#top") == "https://example.com/privacy"
        assert normalize_url("http://example.com:8080/p?lang=en") == "http://example.com:8080/p?lang=en"

    def test_suffix_source_is_recorded(self, tmp_path):
        assert suffix_list_source().endswith(f"bundled with tldextract {tldextract_version()}")
        suffixes = tmp_path / "suffixes.dat"
        suffixes.write_text("com\n", encoding="utf-8")
        try:
            configure_suffix_list(str(suffixes))
            assert suffix_list_source() == f"public suffix list file {suffixes}"
        finally:
            configure_suffix_list(None)
        assert "bundled" in suffix_list_source()
        assert first_level_domain("https://app.foo.example.co.uk/") == "example.co.uk"


def test_normalize_name():
    assert normalize_name("  Harbor\tNOTES  ") == "harbor notes"


class TestMatchExamples:

    def test_identical_policy_url(self):
        g = google_record("com.notes", name="Notes", developer_name="Acme", policy_url="https://acme.io/privacy")
        a = apple_record("1001", name="Notes", developer_name="Acme Inc.", policy_url="https://acme.io/privacy/")
        outcome = match_apps([g], [a])
        assert [(m.google_app_id, m.apple_app_id, m.tier) for m in outcome.matches] == [
            ("com.notes", "1001", MatchTier.policy_url_exact)]
        assert outcome.ambiguous == ()

    def test_policy_domain(self):
        g = google_record("com.a", name="A", policy_url="https://a.example.com/android")
        a = apple_record("1", name="A", policy_url="https://a.example.com/ios")
        [match] = match_apps([g], [a]).matches
        assert match.tier is MatchTier.policy_domain

    def test_ambiguous_notes(self):
        google = [
            google_record("com.one.notes", name="Notes", developer_website="https://notes.dev/one"),
            google_record("com.two.notes", name="Notes", developer_website="https://www.notes.dev"),
        ]
        apple = [apple_record("900", name="Notes", developer_website="https://notes.dev")]
        outcome = match_apps(google, apple)
        assert outcome.matches == ()
        assert len(outcome.ambiguous) == 3
        reasons = {(r.platform, r.app_id): r.reason for r in outcome.ambiguous}
        assert reasons[(Platform.apple, "900")] is AmbiguityReason.multiple_candidates
        assert reasons[(Platform.google, "com.one.notes")] is AmbiguityReason.partner_ambiguous
        assert all(r.tier is MatchTier.developer_domain for r in outcome.ambiguous)

    def test_names_must_agree(self):
        g = google_record("com.a", name="Alpha", policy_url="https://acme.io/privacy")
        a = apple_record("1", name="Alpha Pro", policy_url="https://acme.io/privacy")
        assert match_apps([g], [a]).matches == ()

    def test_better_tier_wins_over_decoy(self):
        g = google_record("com.a", name="Chess", policy_url="https://chess.io/privacy",
                          developer_website="https://chess.io")
        a = apple_record("1", name="Chess", policy_url="https://chess.io/privacy")
        decoy = apple_record("2", name="Chess", developer_website="https://www.chess.io")
        outcome = match_apps([g], [a, decoy])
        assert [(m.apple_app_id, m.tier) for m in outcome.matches] == [("1", MatchTier.policy_url_exact)]

    def test_no_urls_no_match(self):
        assert match_apps([google_record("g", name="X")], [apple_record("a", name="X")]).matches == ()

    def test_duplicate_ids_rejected(self):
        with pytest.raises(MalformedRecord):
            match_apps([google_record("g"), google_record("g")], [])

    def test_pair_tier_none(self):
        assert pair_tier(google_record("g", policy_url="https://a.com/p"), apple_record("a", policy_url="https://b.com/p")) is None


def synthetic_corpus(rng: random.Random) -> tuple[list[AppRecord], list[AppRecord], set[tuple[str, str]]]:
    google, apple, truth = [], [], set()
    for i in range(200):
        name = f"Planted {i}"
        g_id, a_id = f"com.planted{i}.app", f"p{i}"
        kind = i % 3
        if kind == 0:
            g_kw = a_kw = {"policy_url": f"https://planted{i}.com/privacy"}
        elif kind == 1:
            g_kw = {"policy_url": f"https://legal.planted{i}.com/android"}
            a_kw = {"policy_url": f"https://legal.planted{i}.com/ios"}
        else:
            g_kw = {"policy_url": f"https://host{i}-g.net/p", "developer_website": f"https://planted{i}.org"}
            a_kw = {"policy_url": f"https://host{i}-a.net/p", "developer_website": f"https://www.planted{i}.org/"}
        google.append(google_record(g_id, name=name, **g_kw))
        apple.append(apple_record(a_id, name=name, **a_kw))
        truth.add((g_id, a_id))
        if kind != 2 and i % 2 == 0:
            # same name, nothing shared
            apple.append(apple_record(f"d{i}", name=name, policy_url=f"https://other{i}.com/privacy"))
    for k in range(50):
        name = f"Clone {k}"
        google.append(google_record(f"com.clone{k}.a", name=name, developer_website=f"https://clone{k}.com"))
        google.append(google_record(f"com.clone{k}.b", name=name, developer_website=f"https://m.clone{k}.com"))
        apple.append(apple_record(f"c{k}", name=name, developer_website=f"https://clone{k}.com/about"))
    while len(google) < 500:
        j = len(google)
        google.append(google_record(f"com.solo{j}", name=f"Solo G {j}", policy_url=f"https://solo{j}.com/p"))
    while len(apple) < 500:
        j = len(apple)
        apple.append(apple_record(f"s{j}", name=f"Solo A {j}", policy_url=f"https://solo{j}.com/p"))
    rng.shuffle(google)
    rng.shuffle(apple)
    return google, apple, truth


class TestSyntheticCorpus:

    @pytest.fixture(scope="class")
    def corpus(self):
        return synthetic_corpus(random.Random(42))

    def test_precision_and_injection(self, corpus):
        google, apple, truth = corpus
        assert len(google) + len(apple) == 1000
        outcome = match_apps(google, apple)
        pairs = {(m.google_app_id, m.apple_app_id) for m in outcome.matches}
        assert pairs == truth
        assert len({m.google_app_id for m in outcome.matches}) == len(outcome.matches)
        assert len({m.apple_app_id for m in outcome.matches}) == len(outcome.matches)
        assert len(outcome.ambiguous) == 150

    def test_tiers(self, corpus):
        google, apple, _ = corpus
        by_tier = {}
        for m in match_apps(google, apple).matches:
            by_tier.setdefault(m.tier, set()).add(int(m.apple_app_id[1:]) % 3)
            if m.tier is not MatchTier.policy_url_exact:
                assert m.evidence[0] != m.evidence[1]
        assert by_tier == {MatchTier.policy_url_exact: {0}, MatchTier.policy_domain: {1},
                           MatchTier.developer_domain: {2}}

    def test_deterministic_under_shuffle(self, corpus):
        google, apple, _ = corpus
        expected = match_apps(google, apple)
        rng = random.Random(3)
        for _ in range(5):
            g, a = list(google), list(apple)
            rng.shuffle(g)
            rng.shuffle(a)
            assert match_apps(g, a) == expected
        assert match_apps(google, apple, jobs=4) == expected
