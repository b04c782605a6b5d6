"""Character n-gram language identification.

Profiles are character 1-3 gram counts built from the sample texts in
``policies/data/languages/<code>.txt``. A text is scored with add-one smoothed
naive Bayes under uniform priors; the posterior of the best language is then
scaled down when too few of the text's trigrams are known to that profile, so
gibberish that no profile covers does not come back with a confident answer.
"""

import math
import re
from collections import Counter
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

from utils.errors import Undetermined

LANG_DIR = Path(__file__).parent / "data" / "languages"
MAX_ORDER = 3
MIN_CONFIDENCE = 0.5
# trigram coverage at which the confidence is no longer discounted
FULL_COVERAGE = 0.6

_WORD_RE = re.compile(r"[^\W\d_]+")
_CJK_RE = re.compile(r"[぀-ヿ㐀-䶿一-鿿豈-﫿]")


class Detection(NamedTuple):
    code: str
    confidence: float


class Profile(NamedTuple):
    code: str
    counts: Counter
    total: int


def words_of(text: str) -> list[str]:
    """Lowercased letter runs; every CJK character is a word on its own."""
    words = []
    for run in _WORD_RE.findall(text.lower()):
        if _CJK_RE.search(run):
            buf = []
            for ch in run:
                if _CJK_RE.match(ch):
                    if buf:
                        words.append("".join(buf))
                        buf = []
                    words.append(ch)
                else:
                    buf.append(ch)
            if buf:
                words.append("".join(buf))
        else:
            words.append(run)
    return words


def ngrams(text: str, max_order: int = MAX_ORDER) -> Counter:
    counts: Counter = Counter()
    for word in words_of(text):
        padded = f" {word} "
        for n in range(1, max_order + 1):
            for i in range(len(padded) - n + 1):
                gram = padded[i:i + n]
                if gram.strip():
                    counts[gram] += 1
    return counts


def build_profile(code: str, text: str) -> Profile:
    counts = ngrams(text)
    return Profile(code=code, counts=counts, total=sum(counts.values()))


@lru_cache(maxsize=4)
def load_profiles(directory: str | None = None) -> tuple[Profile, ...]:
    root = Path(directory) if directory else LANG_DIR
    profiles = []
    for path in sorted(root.glob("*.txt")):
        profiles.append(build_profile(path.stem, path.read_text(encoding="utf-8")))
    return tuple(profiles)


def _posteriors(features: Counter, profiles: tuple[Profile, ...]) -> list[float]:
    vocabulary = set()
    for p in profiles:
        vocabulary.update(p.counts)
    v = len(vocabulary) + 1
    scores = []
    for p in profiles:
        denom = math.log(p.total + v)
        scores.append(sum(c * (math.log(p.counts.get(g, 0) + 1) - denom) for g, c in features.items()))
    top = max(scores)
    weights = [math.exp(s - top) for s in scores]
    z = sum(weights)
    return [w / z for w in weights]


def trigram_coverage(features: Counter, profile: Profile) -> float:
    tri = {g: c for g, c in features.items() if len(g) == 3}
    total = sum(tri.values())
    if not total:
        return 0.0
    return sum(c for g, c in tri.items() if g in profile.counts) / total


def score_languages(text: str, profiles: tuple[Profile, ...] | None = None) -> list[Detection]:
    """Every profile with its confidence, best first."""
    profiles = profiles or load_profiles()
    features = ngrams(text)
    if not features or not profiles:
        return []
    posts = _posteriors(features, profiles)
    out = []
    for p, post in zip(profiles, posts):
        factor = min(1.0, trigram_coverage(features, p) / FULL_COVERAGE)
        out.append(Detection(p.code, post * factor))
    return sorted(out, key=lambda d: (-d.confidence, d.code))


def detect_language(text: str, profiles: tuple[Profile, ...] | None = None,
                    min_confidence: float = MIN_CONFIDENCE) -> Detection:
    """ISO-639-1 code and confidence; Undetermined below ``min_confidence``."""
    ranked = score_languages(text, profiles)
    if not ranked:
        raise Undetermined(None, 0.0)
    best = ranked[0]
    if best.confidence < min_confidence:
        raise Undetermined(best.code, best.confidence)
    return best
