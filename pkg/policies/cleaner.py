"""Word-count and language gates, then paragraph segmentation."""

from loguru import logger

from models.policies import PolicyDocument, Rejection, RejectReason, Segment, count_words
from policies.extractor import normalize_paragraphs
from policies.language import detect_language
from utils.config import Settings
from utils.errors import Undetermined

DEFAULT_MERGE_FLOOR = 20
DEFAULT_MIN_WORDS = 100
ENGLISH = "en"
UNDETERMINED = "und"


def segment_policy(text: str, merge_floor: int = DEFAULT_MERGE_FLOOR) -> list[Segment]:
    """Split on blank lines and merge neighbours until each segment has ``merge_floor`` words.

    A short tail is folded into the segment before it. Merged paragraphs stay
    separated by a blank line inside the segment, so joining all segments with
    blank lines gives back the normalized input.
    """
    paragraphs = normalize_paragraphs(text).split("\n\n") if text and text.strip() else []
    chunks: list[list[str]] = []
    buffer: list[str] = []
    words = 0
    for para in paragraphs:
        buffer.append(para)
        words += count_words(para)
        if words >= merge_floor:
            chunks.append(buffer)
            buffer, words = [], 0
    if buffer:
        if chunks:
            chunks[-1].extend(buffer)
        else:
            chunks.append(buffer)
    return [Segment(index=i, text="\n\n".join(chunk)) for i, chunk in enumerate(chunks)]


def clean_and_filter(text: str, source_url: str = "", settings: Settings | None = None) -> PolicyDocument | Rejection:
    """PolicyDocument for English text of at least ``min_words`` words, otherwise a Rejection."""
    min_words = settings.min_words if settings else DEFAULT_MIN_WORDS
    merge_floor = settings.merge_floor if settings else DEFAULT_MERGE_FLOOR

    normalized = normalize_paragraphs(text)
    word_count = count_words(normalized)

    language, confidence, detail = UNDETERMINED, 0.0, ""
    if normalized:
        try:
            language, confidence = detect_language(normalized)
        except Undetermined as e:
            confidence = e.confidence
            detail = f"best guess {e.best_guess}" if e.best_guess else ""

    if word_count < min_words:
        return Rejection(source_url=source_url, reason=RejectReason.too_short, language=language,
                         language_confidence=confidence, word_count=word_count, detail=detail)
    if language != ENGLISH:
        logger.debug(f"{source_url}: language {language} ({confidence:.2f})")
        return Rejection(source_url=source_url, reason=RejectReason.non_english, language=language,
                         language_confidence=confidence, word_count=word_count, detail=detail)

    segments = segment_policy(normalized, merge_floor)
    return PolicyDocument(source_url=source_url, language=language, language_confidence=confidence,
                          word_count=sum(s.word_count for s in segments), segments=tuple(segments))
