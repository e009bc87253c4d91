"""Site-level probes: robots.txt, sitemap, custom 404, broken links, fetch metrics."""
import concurrent.futures
import logging
import uuid
from contextlib import nullcontext
from typing import Dict, List, Optional, Sequence
from urllib.parse import urljoin

import requests

from ..core.errors import FetchError
from ..models.audit_models import BrokenLinkReport, FetchResult
from ..models.config_models import FetchPolicy
from ..models.metric_models import MetricId
from .http import HostThrottle, RobotsGate, SessionSource, ThreadSessions, fetch_page, session_for, translate_error

logger = logging.getLogger(__name__)


def _robots_text(origin: str, policy: FetchPolicy, session: Optional[requests.Session],
                 throttle: Optional[HostThrottle]) -> Optional[str]:
    result = fetch_page(f"{origin}/robots.txt", policy, session, throttle)
    if result.status != 200:
        return None
    return result.body.decode("utf-8", errors="replace")


def check_robots(origin: str, policy: Optional[FetchPolicy] = None,
                 session: Optional[requests.Session] = None,
                 throttle: Optional[HostThrottle] = None) -> bool:
    """True when /robots.txt answers 200 with a non-empty body.

    Raises:
        FetchError: On transport failure.
    """
    text = _robots_text(origin, policy or FetchPolicy(), session, throttle)
    return bool(text and text.strip())


def declared_sitemaps(robots_text: str, origin: str) -> List[str]:
    """Absolute URLs of ``Sitemap:`` lines in a robots.txt body."""
    urls = []
    for line in robots_text.splitlines():
        key, _, value = line.partition(":")
        if key.strip().lower() == "sitemap" and value.strip():
            urls.append(urljoin(origin + "/", value.strip()))
    return urls


def check_sitemap(origin: str, policy: Optional[FetchPolicy] = None,
                  session: Optional[requests.Session] = None,
                  throttle: Optional[HostThrottle] = None) -> bool:
    """True when a sitemap declared in robots.txt, or /sitemap.xml, answers 200.

    Raises:
        FetchError: On transport failure of /sitemap.xml.
    """
    policy = policy or FetchPolicy()
    try:
        robots = _robots_text(origin, policy, session, throttle)
    except FetchError as e:
        logger.debug(f"robots.txt fetch failed for {origin}: {e}")
        robots = None

    for url in declared_sitemaps(robots or "", origin):
        try:
            if fetch_page(url, policy, session, throttle).status == 200:
                return True
        except FetchError as e:
            logger.debug(f"Declared sitemap {url} failed: {e}")

    return fetch_page(f"{origin}/sitemap.xml", policy, session, throttle).status == 200


def check_custom_404(origin: str, policy: Optional[FetchPolicy] = None,
                     session: Optional[requests.Session] = None,
                     throttle: Optional[HostThrottle] = None,
                     gate: Optional[RobotsGate] = None) -> bool:
    """True when a random unguessable path answers 404 (soft-404 sites answer 200).

    Raises:
        FetchError: On transport failure, or ProbeDisallowed if robots.txt forbids the path.
    """
    url = f"{origin}/{uuid.uuid4().hex}-not-found-probe"
    if gate is not None:
        gate.check(url)
    return fetch_page(url, policy or FetchPolicy(), session, throttle).status == 404


def _link_status(url: str, policy: FetchPolicy, session: requests.Session,
                 throttle: Optional[HostThrottle]) -> Optional[int]:
    """Status of a link via HEAD, falling back to GET when HEAD is not allowed; None on failure."""
    try:
        with (throttle.slot(url) if throttle else nullcontext()):
            response = session.head(url, timeout=policy.timeout_seconds, allow_redirects=True)
            if response.status_code in (405, 501):
                response = session.get(url, timeout=policy.timeout_seconds, allow_redirects=True,
                                       stream=True)
                response.close()
            return response.status_code
    except requests.RequestException as e:
        logger.debug(f"Link check failed for {url}: {translate_error(e, url)}")
        return None


def probe_broken_links(urls: Sequence[str], policy: Optional[FetchPolicy] = None,
                       session: Optional[SessionSource] = None,
                       throttle: Optional[HostThrottle] = None,
                       gate: Optional[RobotsGate] = None) -> BrokenLinkReport:
    """Check the first ``broken_link_sample`` distinct links in document order.

    A link is broken when it answers with status >= 400 or cannot be reached.
    Links disallowed by robots.txt are skipped. Each worker thread resolves its
    own Session from ``session`` when that is a ThreadSessions.
    """
    policy = policy or FetchPolicy()
    own_session = session is None
    source = ThreadSessions(policy) if own_session else session

    sample: List[str] = []
    for url in dict.fromkeys(urls):
        if len(sample) >= policy.broken_link_sample:
            break
        if gate is not None and not gate.allowed(url):
            logger.debug(f"Skipping {url}: disallowed by robots.txt")
            continue
        sample.append(url)

    try:
        with concurrent.futures.ThreadPoolExecutor(max_workers=policy.max_concurrent) as executor:
            statuses = list(executor.map(
                lambda u: _link_status(u, policy, session_for(source), throttle), sample))
    finally:
        if own_session:
            source.close()

    broken = tuple(url for url, status in zip(sample, statuses) if status is None or status >= 400)
    return BrokenLinkReport(checked=len(sample), broken=len(broken), broken_urls=broken)


def fetch_metrics(home: FetchResult, subresources: Sequence[str]) -> Dict[MetricId, float]:
    """Metrics derived from the home page fetch itself."""
    return {
        MetricId.PAGE_SIZE_KB: round(len(home.body) / 1024.0, 1),
        MetricId.LOAD_TIME_MS: home.load_time_ms,
        MetricId.REQUEST_COUNT: float(1 + len(set(subresources))),
        MetricId.GZIP: 1.0 if home.gzip else 0.0,
        MetricId.SECURITY: 1.0 if home.https else 0.0,
    }
