"""Polite policy fetcher.

robots.txt is consulted before any content request to an origin, requests to one
host are serialized and spaced at least ``min_interval_ms`` apart, and transient
failures (timeouts, 429, 5xx) are retried with exponential backoff. Redirects are
followed here rather than inside requests, at most ``MAX_REDIRECTS`` hops, and every
hop passes the same robots.txt and spacing checks as the first request. Network faults
come back as FetchResult statuses; nothing in here raises on a bad server.
"""

import os
import threading
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable
from urllib.parse import urljoin, urlparse
from urllib.robotparser import RobotFileParser

import requests
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from utils.config import Settings
from utils.slugify import url_slug

HTML_TYPES = ("text/html", "application/xhtml+xml", "text/plain")
UNSUPPORTED_HOSTS = ("docs.google.com", "drive.google.com")
MAX_RETRY_AFTER_S = 120.0
MAX_REDIRECTS = 5
REDIRECT_CODES = (301, 302, 303, 307, 308)


class FetchStatus(str, Enum):
    ok = "ok"
    robots_denied = "robots_denied"
    http_error = "http_error"
    timeout = "timeout"
    non_html = "non_html"
    unsupported_format = "unsupported_format"


class FetchResult(BaseModel):
    """Outcome of one policy fetch. ``attempts`` counts content requests only."""

    model_config = ConfigDict(frozen=True)

    url: str
    status: FetchStatus
    http_code: int | None = None
    body: bytes | None = None
    attempts: int = Field(0, ge=0)
    content_type: str | None = None
    encoding: str | None = None

    @property
    def ok(self) -> bool:
        return self.status is FetchStatus.ok


def origin_of(url: str) -> str:
    p = urlparse(url)
    return f"{p.scheme.lower()}://{p.netloc.lower()}"


def host_of(url: str) -> str:
    return (urlparse(url).hostname or "").lower()


def retry_after_seconds(value: str | None) -> float | None:
    if not value:
        return None
    try:
        return min(max(float(value.strip()), 0.0), MAX_RETRY_AFTER_S)
    except ValueError:
        # HTTP-date form is not worth honouring here
        return None


def backoff_delay(settings: Settings, attempt: int, retry_after: float | None = None) -> float:
    """Seconds to wait after failed ``attempt`` (1-based): backoff·2^(attempt-1), or Retry-After if longer."""
    delay = settings.backoff_ms / 1000.0 * (2 ** (attempt - 1))
    if retry_after is not None and retry_after > delay:
        delay = retry_after
    return delay


class PoliteFetcher:
    """Stateful fetcher shared by all worker threads of one crawl."""

    def __init__(self, settings: Settings, session: requests.Session | None = None,
                 sleep: Callable[[float], None] = time.sleep, clock: Callable[[], float] = time.monotonic):
        self.settings = settings
        self.session = session or requests.Session()
        self.session.headers.update({"User-Agent": settings.user_agent})
        self._sleep = sleep
        self._clock = clock
        self._robots: dict[str, RobotFileParser] = {}
        self._last_request: dict[str, float] = {}
        self._host_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._registry_lock = threading.Lock()

    # ---------- per-host spacing ----------

    def _lock_for(self, host: str) -> threading.Lock:
        with self._registry_lock:
            return self._host_locks[host]

    def _wait_turn(self, host: str) -> None:
        last = self._last_request.get(host)
        if last is not None:
            remaining = last + self.settings.min_interval_ms / 1000.0 - self._clock()
            if remaining > 0:
                self._sleep(remaining)
        self._last_request[host] = self._clock()

    def _get(self, url: str, allow_redirects: bool = False) -> requests.Response:
        self._wait_turn(host_of(url))
        return self.session.get(url, timeout=self.settings.timeout_s, allow_redirects=allow_redirects)

    # ---------- robots.txt ----------

    def _robots_for(self, url: str) -> RobotFileParser:
        origin = origin_of(url)
        parser = self._robots.get(origin)
        if parser is not None:
            return parser
        parser = RobotFileParser(f"{origin}/robots.txt")
        try:
            resp = self._get(f"{origin}/robots.txt", allow_redirects=True)
            if resp.status_code in (401, 403):
                parser.disallow_all = True
            elif 400 <= resp.status_code < 500:
                parser.allow_all = True
            elif resp.status_code >= 500:
                parser.disallow_all = True
            else:
                parser.parse(resp.text.splitlines())
        except requests.RequestException as e:
            logger.debug(f"robots.txt unreachable for {origin}: {e}")
            parser.disallow_all = True
        parser.modified()
        self._robots[origin] = parser
        return parser

    def allowed(self, url: str) -> bool:
        return self._robots_for(url).can_fetch(self.settings.user_agent, url)

    # ---------- fetching ----------

    def fetch(self, url: str) -> FetchResult:
        parsed = urlparse(url)
        if parsed.scheme not in ("http", "https") or not parsed.hostname:
            logger.warning(f"⚠ not an absolute http(s) URL: {url!r}")
            return FetchResult(url=url, status=FetchStatus.http_error)

        # each redirect hop is checked against robots.txt and spaced like a fresh request
        target = url
        for _ in range(MAX_REDIRECTS + 1):
            host = host_of(target)
            if host in UNSUPPORTED_HOSTS:
                return FetchResult(url=url, status=FetchStatus.unsupported_format)
            with self._lock_for(host):
                if not self.allowed(target):
                    logger.debug(f"robots.txt disallows {target}")
                    return FetchResult(url=url, status=FetchStatus.robots_denied)
                result, location = self._fetch_with_retries(url, target)
            if location is None:
                return result
            next_target = urljoin(target, location)
            if urlparse(next_target).scheme not in ("http", "https"):
                logger.debug(f"{target} redirects to unsupported {next_target!r}")
                return result
            logger.debug(f"{target} redirects to {next_target}")
            target = next_target
        logger.warning(f"⚠ {url}: more than {MAX_REDIRECTS} redirects")
        return result

    def _fetch_with_retries(self, url: str, target: str) -> tuple[FetchResult, str | None]:
        """Fetch ``target`` on behalf of ``url``; a 3xx comes back with its Location for the caller to follow."""
        max_attempts = self.settings.max_retries
        result: FetchResult | None = None
        for attempt in range(1, max_attempts + 1):
            retry_after = None
            try:
                resp = self._get(target)
            except requests.Timeout:
                result = FetchResult(url=url, status=FetchStatus.timeout, attempts=attempt)
            except requests.RequestException as e:
                logger.debug(f"request to {target} failed: {e}")
                result = FetchResult(url=url, status=FetchStatus.http_error, attempts=attempt)
            else:
                code = resp.status_code
                if code in REDIRECT_CODES:
                    result = FetchResult(url=url, status=FetchStatus.http_error, http_code=code, attempts=attempt)
                    return result, resp.headers.get("Location") or None
                if code == 429 or code >= 500:
                    retry_after = retry_after_seconds(resp.headers.get("Retry-After"))
                    result = FetchResult(url=url, status=FetchStatus.http_error, http_code=code, attempts=attempt)
                elif code >= 400:
                    return FetchResult(url=url, status=FetchStatus.http_error, http_code=code, attempts=attempt), None
                else:
                    return self._classify_body(url, resp, attempt), None

            if attempt < max_attempts:
                delay = backoff_delay(self.settings, attempt, retry_after)
                logger.debug(f"{target}: {result.status.value} {result.http_code or ''}, retrying in {delay:.2f}s")
                self._sleep(delay)
        return result, None

    @staticmethod
    def _classify_body(url: str, resp: requests.Response, attempt: int) -> FetchResult:
        content_type = (resp.headers.get("Content-Type") or "").split(";")[0].strip().lower()
        if content_type and not content_type.startswith(HTML_TYPES):
            return FetchResult(url=url, status=FetchStatus.non_html, http_code=resp.status_code,
                               attempts=attempt, content_type=content_type)
        if resp.content[:5] == b"%PDF-":
            return FetchResult(url=url, status=FetchStatus.non_html, http_code=resp.status_code,
                               attempts=attempt, content_type="application/pdf")
        declared = resp.encoding if "charset" in (resp.headers.get("Content-Type") or "").lower() else None
        return FetchResult(url=url, status=FetchStatus.ok, http_code=resp.status_code, body=resp.content,
                           attempts=attempt, content_type=content_type or None, encoding=declared)


def fetch_policy(url: str, settings: Settings, fetcher: PoliteFetcher | None = None) -> FetchResult:
    return (fetcher or PoliteFetcher(settings)).fetch(url)


def fetch_many(urls: Iterable[str], settings: Settings, fetcher: PoliteFetcher | None = None) -> list[FetchResult]:
    """Fetch every URL, one worker per host at a time; results come back in input order."""
    urls = list(urls)
    fetcher = fetcher or PoliteFetcher(settings)
    by_host: dict[str, list[int]] = defaultdict(list)
    for i, url in enumerate(urls):
        by_host[host_of(url)].append(i)

    results: list[FetchResult | None] = [None] * len(urls)

    def run_host(indexes: list[int]) -> None:
        for i in indexes:
            results[i] = fetcher.fetch(urls[i])

    with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
        for future in [pool.submit(run_host, idx) for _, idx in sorted(by_host.items())]:
            future.result()
    return results


def store_result(result: FetchResult, out_dir: str | Path) -> dict:
    """Write an ok body to ``out_dir`` and return its manifest row."""
    row = {
        "url": result.url,
        "status": result.status.value,
        "http_code": result.http_code,
        "attempts": result.attempts,
        "content_type": result.content_type,
        "encoding": result.encoding,
        "file": None,
    }
    if result.ok and result.body is not None:
        os.makedirs(out_dir, exist_ok=True)
        name = f"{url_slug(result.url)}.html"
        with open(os.path.join(out_dir, name), "wb") as f:
            f.write(result.body)
        row["file"] = name
    return row
