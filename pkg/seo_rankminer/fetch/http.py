"""Policy-bound page fetching with typed transport errors and per-host politeness."""
import logging
import socket
import threading
import time
from contextlib import contextmanager, nullcontext
from typing import Dict, Iterator, List, Optional, Union
from urllib.parse import urlsplit
from urllib.robotparser import RobotFileParser

import requests

from ..core import constants
from ..core.errors import (
    ConnectionFailure,
    DnsFailure,
    FetchError,
    FetchTimeout,
    ProbeDisallowed,
    TlsError,
    TooManyRedirects,
)
from ..models.audit_models import FetchResult
from ..models.config_models import FetchPolicy

logger = logging.getLogger(__name__)

_DNS_MARKERS = (
    "name or service not known",
    "nodename nor servname",
    "getaddrinfo failed",
    "temporary failure in name resolution",
    "no address associated with hostname",
    "failed to resolve",
    "nameresolutionerror",
)


def validate_url(url: str) -> str:
    """Return the URL if it is absolute http(s), else raise ValueError."""
    parts = urlsplit(url)
    if parts.scheme not in ("http", "https") or not parts.hostname:
        raise ValueError(f"Not an absolute http(s) URL: {url!r}")
    return url


def origin_of(url: str) -> str:
    parts = urlsplit(url)
    return f"{parts.scheme}://{parts.netloc}"


def new_session(policy: FetchPolicy) -> requests.Session:
    """A Session carrying the policy's identity, redirect cap and TLS verification."""
    session = requests.Session()
    session.headers.update({
        "User-Agent": policy.user_agent,
        "Accept-Encoding": "gzip, deflate",
        "Accept": "text/html,application/xhtml+xml,*/*;q=0.8",
    })
    session.max_redirects = policy.max_redirects
    session.verify = policy.verify_tls
    return session


class ThreadSessions:
    """One Session per calling thread, all built from the same policy."""

    def __init__(self, policy: FetchPolicy):
        self.policy = policy
        self._local = threading.local()
        self._lock = threading.Lock()
        self._sessions: List[requests.Session] = []

    def get(self) -> requests.Session:
        session = getattr(self._local, "session", None)
        if session is None:
            session = new_session(self.policy)
            self._local.session = session
            with self._lock:
                self._sessions.append(session)
        return session

    def close(self) -> None:
        with self._lock:
            sessions, self._sessions = self._sessions, []
        for session in sessions:
            session.close()


SessionSource = Union[requests.Session, ThreadSessions]


def session_for(source: SessionSource) -> requests.Session:
    """The Session to use on the current thread."""
    return source.get() if isinstance(source, ThreadSessions) else source


def _chain(exc: BaseException) -> Iterator[BaseException]:
    """The exception plus everything reachable through causes, contexts, args and reasons."""
    seen = set()
    pending = [exc]
    while pending:
        current = pending.pop()
        if current is None or id(current) in seen:
            continue
        seen.add(id(current))
        yield current
        pending.extend([current.__cause__, current.__context__])
        pending.extend(arg for arg in getattr(current, "args", ()) if isinstance(arg, BaseException))
        reason = getattr(current, "reason", None)
        if isinstance(reason, BaseException):
            pending.append(reason)


def _is_dns_failure(exc: BaseException) -> bool:
    for current in _chain(exc):
        if isinstance(current, socket.gaierror) or type(current).__name__ == "NameResolutionError":
            return True
        if any(marker in str(current).lower() for marker in _DNS_MARKERS):
            return True
    return False


def _is_read_timeout(exc: BaseException) -> bool:
    return any(isinstance(c, socket.timeout) or type(c).__name__ == "ReadTimeoutError" for c in _chain(exc))


def translate_error(exc: requests.RequestException, url: str) -> FetchError:
    """Map a requests exception onto our FetchError hierarchy."""
    if isinstance(exc, requests.exceptions.TooManyRedirects):
        return TooManyRedirects(f"Too many redirects fetching {url}", url)
    if isinstance(exc, requests.exceptions.SSLError):
        return TlsError(f"TLS failure fetching {url}: {exc}", url)
    if isinstance(exc, requests.exceptions.Timeout) or _is_read_timeout(exc):
        return FetchTimeout(f"Timed out fetching {url}", url)
    if isinstance(exc, requests.exceptions.ConnectionError) and _is_dns_failure(exc):
        return DnsFailure(f"Could not resolve host for {url}", url)
    return ConnectionFailure(f"Failed to fetch {url}: {exc}", url)


class HostThrottle:
    """Serializes requests per host and spaces them by the policy delay."""

    def __init__(self, delay_ms: int = constants.DEFAULT_PER_HOST_DELAY_MS):
        self.delay = delay_ms / 1000.0
        self._guard = threading.Lock()
        self._locks: Dict[str, threading.Lock] = {}
        self._last: Dict[str, float] = {}

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    @contextmanager
    def slot(self, url: str) -> Iterator[None]:
        host = (urlsplit(url).hostname or "").lower()
        with self._lock_for(host):
            wait = self._last.get(host, 0.0) + self.delay - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            try:
                yield
            finally:
                self._last[host] = time.monotonic()


class RobotsGate:
    """Answers whether our user agent may fetch a URL, one robots.txt read per origin."""

    def __init__(self, policy: FetchPolicy, session: Optional[SessionSource] = None):
        self.policy = policy
        self.session = session if session is not None else ThreadSessions(policy)
        self._parsers: Dict[str, Optional[RobotFileParser]] = {}
        self._lock = threading.Lock()

    def _parser(self, origin: str) -> Optional[RobotFileParser]:
        with self._lock:
            if origin in self._parsers:
                return self._parsers[origin]
        parser: Optional[RobotFileParser] = None
        try:
            response = session_for(self.session).get(f"{origin}/robots.txt", timeout=self.policy.timeout_seconds)
            if response.status_code == 200:
                parser = RobotFileParser()
                parser.parse(response.text.splitlines())
        except requests.RequestException as e:
            logger.debug(f"robots.txt unavailable for {origin}: {e}")
        with self._lock:
            self._parsers[origin] = parser
        return parser

    def allowed(self, url: str) -> bool:
        if not self.policy.respect_robots:
            return True
        parser = self._parser(origin_of(url))
        return True if parser is None else parser.can_fetch(self.policy.user_agent, url)

    def check(self, url: str) -> None:
        """Raise ProbeDisallowed when robots.txt forbids the URL."""
        if not self.allowed(url):
            raise ProbeDisallowed(f"robots.txt disallows {url}", url)


def fetch_page(url: str, policy: Optional[FetchPolicy] = None,
               session: Optional[requests.Session] = None,
               throttle: Optional[HostThrottle] = None) -> FetchResult:
    """GET a URL under the fetch policy.

    Follows up to ``max_redirects`` redirects, reads at most ``max_body_kb``
    of (decoded) body and times the request from send to last byte read.

    Raises:
        ValueError: If the URL is not absolute http(s).
        FetchError: DnsFailure, FetchTimeout, TooManyRedirects, TlsError or ConnectionFailure.
    """
    validate_url(url)
    policy = policy or FetchPolicy()
    own_session = session is None
    session = session or new_session(policy)
    limit = policy.max_body_bytes

    try:
        with (throttle.slot(url) if throttle else nullcontext()):
            started = time.perf_counter()
            try:
                response = session.get(url, timeout=policy.timeout_seconds, stream=True,
                                       allow_redirects=True)
                chunks = []
                size = 0
                truncated = False
                for chunk in response.iter_content(chunk_size=constants.STREAM_CHUNK_SIZE):
                    if size + len(chunk) > limit:
                        chunks.append(chunk[: limit - size])
                        truncated = True
                        break
                    chunks.append(chunk)
                    size += len(chunk)
                response.close()
            except requests.RequestException as e:
                raise translate_error(e, url) from e
            elapsed_ms = (time.perf_counter() - started) * 1000.0
    finally:
        if own_session:
            session.close()

    encoding = response.headers.get("Content-Encoding", "").lower()
    compressed = any(token.strip() in constants.COMPRESSED_ENCODINGS for token in encoding.split(","))
    if truncated:
        logger.warning(f"Body of {url} truncated at {policy.max_body_kb} KB")

    return FetchResult(
        requested_url=url,
        final_url=response.url,
        status=response.status_code,
        body=b"".join(chunks),
        load_time_ms=round(elapsed_ms, 1),
        gzip=compressed,
        https=urlsplit(response.url).scheme == "https",
        headers={k.lower(): v for k, v in response.headers.items()},
        truncated=truncated,
        redirects=len(response.history),
    )
