from pathlib import Path

import pytest

from models.policies import WORD, PolicyDocument, Rejection, RejectReason, count_words
from policies.cleaner import clean_and_filter, segment_policy
from utils.config import load_settings

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def english_words() -> list[str]:
    return WORD.findall((FIXTURES / "policy_en.txt").read_text(encoding="utf-8"))


def words(n: int, start: int = 0) -> str:
    return " ".join(f"w{i}" for i in range(start, start + n))


class TestSegmentPolicy:

    def test_two_long_paragraphs(self):
        segments = segment_policy(words(50) + "\n\n" + words(50, 50))
        assert len(segments) == 2
        assert [s.word_count for s in segments] == [50, 50]

    def test_short_lines_merge(self):
        text = "\n\n".join(words(3, 3 * i) for i in range(10))
        segments = segment_policy(text)
        assert len(segments) == 1
        assert segments[0].word_count == 30

    def test_single_paragraph_identity(self):
        text = "We collect your email address to send you receipts."
        segments = segment_policy(text)
        assert [s.text for s in segments] == [text]

    def test_concatenation_and_order(self):
        paragraphs = [words(n, 100 * i) for i, n in enumerate([5, 30, 12, 9, 40, 2, 1])]
        text = "\n\n".join(paragraphs)
        segments = segment_policy(text)
        assert "\n\n".join(s.text for s in segments) == text
        assert [s.index for s in segments] == list(range(len(segments)))
        assert all(s.word_count >= 20 for s in segments)

    def test_merge_floor_setting(self):
        text = "\n\n".join(words(3, 3 * i) for i in range(10))
        assert len(segment_policy(text, merge_floor=3)) == 10

    def test_empty(self):
        assert segment_policy("   \n\n ") == []


class TestCleanAndFilter:

    def test_word_gate_is_exact(self, english_words):
        short = clean_and_filter(" ".join(english_words[:99]), "https://x.example/p")
        assert isinstance(short, Rejection)
        assert short.reason is RejectReason.too_short
        assert short.word_count == 99
        assert short.language == "en"

        doc = clean_and_filter(" ".join(english_words[:100]), "https://x.example/p")
        assert isinstance(doc, PolicyDocument)
        assert doc.word_count == 100
        assert doc.language == "en"

    def test_german_policy_rejected(self):
        german = (FIXTURES / "policy_de.txt").read_text(encoding="utf-8")
        long_german = "\n\n".join([german] * 11)
        assert count_words(long_german) >= 5000
        result = clean_and_filter(long_german, "https://x.example/de")
        assert isinstance(result, Rejection)
        assert result.reason is RejectReason.non_english
        assert result.language == "de"

    def test_undetermined_language_is_non_english(self):
        result = clean_and_filter(" ".join(["xqz qqq zzz"] * 40))
        assert result.reason is RejectReason.non_english
        assert result.language == "und"

    def test_english_policy_segments(self):
        text = (FIXTURES / "policy_en.txt").read_text(encoding="utf-8")
        doc = clean_and_filter(text, "https://harbornotes.example/privacy")
        assert isinstance(doc, PolicyDocument)
        assert doc.word_count == count_words(text)
        assert doc.language_confidence >= 0.9
        assert len(doc.segments) > 5
        assert doc.text.split() == text.split()

    def test_settings_change_gate(self, english_words):
        settings = load_settings(overrides={"min_words": 50}, use_env=False)
        assert isinstance(clean_and_filter(" ".join(english_words[:60]), settings=settings), PolicyDocument)
