"""Is-this-a-privacy-policy verdict: keyword baseline, overridable by external scores."""

import json
import re
from functools import lru_cache
from pathlib import Path
from typing import Mapping, NamedTuple

from loguru import logger

from models.policies import PolicyDocument, count_words
from utils.errors import MalformedRecord
from utils.json_utils import read_jsonl

LEXICON_FILE = Path(__file__).parent / "data" / "policy_lexicon.json"


class PolicyLexicon(NamedTuple):
    terms: dict[str, float]
    saturation: float
    threshold: float
    patterns: tuple[tuple[re.Pattern, float], ...]


@lru_cache(maxsize=4)
def load_lexicon(path: str | None = None) -> PolicyLexicon:
    with open(path or LEXICON_FILE, "r", encoding="utf-8") as f:
        raw = json.load(f)
    terms = {str(k).lower(): float(v) for k, v in raw["terms"].items()}
    # prefix match: "collect" also counts "collection", "third part" counts "third party"
    patterns = tuple((re.compile(r"\b" + re.escape(term), re.IGNORECASE), w) for term, w in sorted(terms.items()))
    return PolicyLexicon(terms=terms, saturation=float(raw.get("saturation", 4.0)),
                         threshold=float(raw.get("threshold", 0.5)), patterns=patterns)


def lexicon_score(text: str, lexicon: PolicyLexicon | None = None) -> float:
    """Weighted lexicon hits per 100 words over the saturation constant, clipped to [0, 1]."""
    lexicon = lexicon or load_lexicon()
    words = count_words(text)
    if not words:
        return 0.0
    hits = sum(w * len(p.findall(text)) for p, w in lexicon.patterns)
    return min(1.0, hits * 100.0 / words / lexicon.saturation)


def is_policy(doc: PolicyDocument, scores: Mapping[str, float] | None = None,
              threshold: float | None = None, lexicon: PolicyLexicon | None = None) -> tuple[bool, float]:
    """(verdict, score); an external score for ``doc.source_url`` replaces the baseline."""
    lexicon = lexicon or load_lexicon()
    threshold = lexicon.threshold if threshold is None else threshold
    if scores is not None and doc.source_url in scores:
        score = scores[doc.source_url]
    else:
        score = lexicon_score(doc.text, lexicon)
    return score >= threshold, score


def load_policy_scores(path: str | Path) -> dict[str, float]:
    """External is-policy scores, JSONL ``{url, score}``."""
    scores: dict[str, float] = {}
    for i, row in enumerate(read_jsonl(path), start=1):
        url, score = row.get("url"), row.get("score")
        if not isinstance(url, str) or not isinstance(score, (int, float)) or not 0.0 <= score <= 1.0:
            raise MalformedRecord(f"{path}:{i}: expected {{url, score in [0,1]}}")
        if url in scores:
            logger.warning(f"⚠ {path}:{i}: duplicate score for {url}, keeping the last one")
        scores[url] = float(score)
    return scores
