"""URL normalization and first-level (registrable) domains.

The suffix table is the public-suffix snapshot that ships inside tldextract, so the
pinned tldextract release in requirements.txt fixes the snapshot date. No suffix
list is ever downloaded.
"""

import ipaddress
from functools import lru_cache
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

import tldextract
from loguru import logger

from utils.errors import NoHost

DEFAULT_PORTS = {"http": 80, "https": 443}
# tldextract 5.1.2 ships the suffix list as of 2024-03
PINNED_TLDEXTRACT = "5.1.2"

_extractor: tldextract.TLDExtract | None = None
_suffix_file: str | None = None


def tldextract_version() -> str:
    try:
        return version("tldextract")
    except PackageNotFoundError:
        return "unknown"


def suffix_list_source() -> str:
    """Where first-level domains come from, for logs and report headers."""
    if _suffix_file:
        return f"public suffix list file {_suffix_file}"
    return f"public suffix list snapshot bundled with tldextract {tldextract_version()}"


def configure_suffix_list(path: str | None = None) -> None:
    """Use a local public-suffix file instead of tldextract's bundled snapshot."""
    global _extractor, _suffix_file
    if path:
        uri = Path(path).resolve().as_uri()
        _extractor = tldextract.TLDExtract(cache_dir=None, suffix_list_urls=(uri,), fallback_to_snapshot=True)
        _suffix_file = str(path)
    else:
        _extractor = None
        _suffix_file = None
    _registrable.cache_clear()


def _get_extractor() -> tldextract.TLDExtract:
    global _extractor
    if _extractor is None:
        installed = tldextract_version()
        if installed != PINNED_TLDEXTRACT:
            logger.warning(f"⚠ tldextract {installed} installed, {PINNED_TLDEXTRACT} expected: "
                           "first-level domains may differ from the recorded suffix snapshot")
        _extractor = tldextract.TLDExtract(cache_dir=None, suffix_list_urls=())
    return _extractor


def _host_of(url: str) -> str:
    try:
        parts = urlsplit((url or "").strip())
        host = parts.hostname
    except ValueError as e:
        raise NoHost(f"cannot parse URL {url!r}: {e}") from None
    if not parts.scheme or not host:
        raise NoHost(f"no host in {url!r}")
    return host.lower().rstrip(".")


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, drop default port, fragment and trailing slash; keep the query."""
    parts = urlsplit((url or "").strip())
    host = _host_of(url)
    scheme = parts.scheme.lower()
    try:
        port = parts.port
    except ValueError:
        port = None
    netloc = f"[{host}]" if ":" in host else host
    if port is not None and DEFAULT_PORTS.get(scheme) != port:
        netloc = f"{netloc}:{port}"
    path = parts.path.rstrip("/")
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def _is_ip(host: str) -> bool:
    try:
        ipaddress.ip_address(host)
        return True
    except ValueError:
        return False


@lru_cache(maxsize=65536)
def _registrable(host: str) -> str:
    if _is_ip(host):
        return host
    ext = _get_extractor()(host)
    if ext.domain and ext.suffix:
        return f"{ext.domain}.{ext.suffix}"
    return host


def first_level_domain(url: str) -> str:
    """eTLD+1 of the URL's host, lowercased; IPs and suffix-less hosts come back as is."""
    return _registrable(_host_of(url))
