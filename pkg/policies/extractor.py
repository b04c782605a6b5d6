"""Visible-text extraction with boilerplate removal.

The default ``density`` extractor walks the parsed tree, drops page chrome
(script/style/nav/header/footer, ...), builds paragraphs at block boundaries and
throws away paragraphs that are mostly link text. ``trafilatura`` is kept as an
alternative extractor, selected with the ``extractor`` setting.
"""

import re

import trafilatura
from bs4 import BeautifulSoup, NavigableString, Tag
from bs4.dammit import EncodingDetector
from loguru import logger

from utils.errors import UnparseableMarkup

DROP_TAGS = frozenset({
    "script", "style", "nav", "header", "footer", "noscript", "template", "head",
    "iframe", "svg", "canvas", "object", "embed", "button", "select", "option",
})
BLOCK_TAGS = frozenset({
    "html", "body", "main", "article", "section", "div", "p", "blockquote", "pre",
    "ul", "ol", "li", "dl", "dt", "dd", "table", "thead", "tbody", "tfoot", "tr", "td", "th",
    "h1", "h2", "h3", "h4", "h5", "h6", "address", "figure", "figcaption", "aside",
    "form", "fieldset", "details", "summary", "hr", "caption",
})
DEFAULT_LINK_DENSITY = 0.5

_TAG_RE = re.compile(r"<(?:[A-Za-z][A-Za-z0-9-]*[\s/>]|!|/[A-Za-z])")
_WS_RE = re.compile(r"\s+")
_PARA_RE = re.compile(r"\n\s*\n")


def collapse(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def normalize_paragraphs(text: str) -> str:
    """Collapse whitespace inside paragraphs; paragraphs separated by one blank line."""
    paragraphs = (collapse(p) for p in _PARA_RE.split(text or ""))
    return "\n\n".join(p for p in paragraphs if p)


def decode_markup(raw: bytes | str, declared_encoding: str | None = None) -> str:
    """Bytes to text: HTTP-declared charset, else the document's own declaration, else UTF-8."""
    if isinstance(raw, str):
        return raw
    data, bom_encoding = EncodingDetector.strip_byte_order_mark(raw)
    candidates = [declared_encoding, bom_encoding, EncodingDetector.find_declared_encoding(data, is_html=True)]
    for encoding in candidates:
        if not encoding:
            continue
        try:
            return data.decode(encoding)
        except (LookupError, UnicodeDecodeError):
            logger.debug(f"declared encoding {encoding!r} does not decode, falling back")
    return data.decode("utf-8", errors="replace")


def looks_like_markup(text: str) -> bool:
    return bool(_TAG_RE.search(text))


class _ParagraphBuilder:
    """Accumulates inline text and link characters until a block boundary."""

    def __init__(self, link_density: float):
        self.link_density = link_density
        self.paragraphs: list[str] = []
        self._parts: list[str] = []
        self._link_chars = 0
        self.dropped = 0

    def add(self, text: str, in_link: bool) -> None:
        self._parts.append(text)
        if in_link:
            self._link_chars += len(_WS_RE.sub("", text))

    def flush(self) -> None:
        text = collapse("".join(self._parts))
        link_chars = self._link_chars
        self._parts, self._link_chars = [], 0
        if not text:
            return
        total = len(_WS_RE.sub("", text))
        if total and link_chars / total > self.link_density:
            self.dropped += 1
            return
        self.paragraphs.append(text)

    def walk(self, node: Tag, in_link: bool = False) -> None:
        for child in node.children:
            if isinstance(child, NavigableString):
                # comments, doctypes and processing instructions are subclasses
                if type(child) is NavigableString:
                    self.add(str(child), in_link)
                continue
            if not isinstance(child, Tag):
                continue
            name = (child.name or "").lower()
            if name in DROP_TAGS:
                continue
            if name == "br":
                self.flush()
            elif name in BLOCK_TAGS:
                self.flush()
                self.walk(child, in_link)
                self.flush()
            else:
                self.walk(child, in_link or name == "a")


def _density_extract(markup: str, link_density: float) -> str:
    try:
        soup = BeautifulSoup(markup, "html.parser")
    except Exception as e:
        raise UnparseableMarkup(f"markup could not be parsed: {e}") from e
    builder = _ParagraphBuilder(link_density)
    builder.walk(soup)
    builder.flush()
    if builder.dropped:
        logger.debug(f"dropped {builder.dropped} link-dense block(s)")
    return "\n\n".join(builder.paragraphs)


def _trafilatura_extract(markup: str) -> str:
    raw = trafilatura.extract(markup, include_comments=False, include_tables=True) or ""
    return "\n\n".join(collapse(line) for line in raw.splitlines() if collapse(line))


def extract_text(html: bytes | str, link_density: float = DEFAULT_LINK_DENSITY, extractor: str = "density",
                 declared_encoding: str | None = None) -> str:
    """Visible text of a page, paragraphs separated by blank lines; "" for empty input.

    Text without any tags passes through with only its whitespace normalized.
    """
    markup = decode_markup(html or b"", declared_encoding)
    if not markup.strip():
        return ""
    if not looks_like_markup(markup):
        return normalize_paragraphs(markup)
    if extractor == "trafilatura":
        return _trafilatura_extract(markup)
    return _density_extract(markup, link_density)
