import hashlib
import re


def safe_slug(text: str, max_length: int = 80) -> str:
    """Create a safe underscore_slug from free text (lowercase, alnum + _)."""
    text = (text or "").lower().strip()
    text = text.replace("&", "and")
    text = re.sub(r"[^a-z0-9\s-]", " ", text)
    text = re.sub(r"[\s-]+", "_", text)
    return text[:max_length].strip("_")


def url_slug(url: str, max_length: int = 80) -> str:
    """File-name stem for a fetched URL: readable slug plus a short digest so distinct URLs never collide."""
    stem = re.sub(r"^[a-z]+://", "", (url or "").lower())
    digest = hashlib.sha1((url or "").encode("utf-8")).hexdigest()[:10]
    return f"{safe_slug(stem, max_length)}_{digest}"
