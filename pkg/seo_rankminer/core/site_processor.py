import logging
import concurrent.futures
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..audit.lint import lint_markup
from ..audit.onpage import extract_link_urls, extract_onpage, extract_stylesheet_urls, extract_subresources
from ..audit.parser import parse_html
from ..fetch.http import HostThrottle, RobotsGate, SessionSource, ThreadSessions, fetch_page, origin_of, session_for, validate_url
from ..fetch.probes import check_custom_404, check_robots, check_sitemap, fetch_metrics, probe_broken_links
from ..models.audit_models import AuditReport, FetchResult
from ..models.config_models import RunConfig
from ..models.dataset_models import Dataset, SiteEntry, SiteRecord
from ..models.metric_models import MetricId, MetricRegistry, builtin_registry
from ..providers.base import BaseProvider, normalise_domain
from ..providers.collector import collect
from . import config
from .errors import FetchError, TlsError, ConnectionFailure, FetchTimeout

logger = logging.getLogger(__name__)


class SiteAuditor:
    """
    Audits sites: one home-page fetch, on-page extraction, lint, probes and provider lookups.
    """

    def __init__(self, run_config: Optional[RunConfig] = None, provider: Optional[BaseProvider] = None,
                 registry: Optional[MetricRegistry] = None, session: Optional[SessionSource] = None):
        """
        Initialize the SiteAuditor.

        Args:
            run_config: Fetch policy and audit settings; defaults when None
            provider: Off-page metric provider (usually a composite), or None for offline runs
            registry: Metric registry, the built-in 38 metrics by default
            session: HTTP session to reuse, or None for one session per worker thread
        """
        self.config = run_config or RunConfig()
        self.policy = self.config.fetch
        self.provider = provider
        self.registry = registry or builtin_registry()
        self.sessions = session if session is not None else ThreadSessions(self.policy)
        self.throttle = HostThrottle(self.policy.per_host_delay_ms)
        self.gate = RobotsGate(self.policy, self.sessions)

    def _probe(self, name: str, errors: Dict[str, str], func, *args, **kwargs):
        """Run one probe; failures are logged, recorded and yield None."""
        try:
            return func(*args, **kwargs)
        except FetchError as e:
            logger.warning(f"Probe {name} failed: {e}")
            errors[name] = str(e)
            return None

    def _stylesheets(self, urls: Sequence[str], errors: Dict[str, str]) -> List[str]:
        texts = []
        for url in urls[: self.config.audit.max_stylesheets]:
            result = self._probe(f"stylesheet {url}", errors, fetch_page, url, self.policy,
                                 session_for(self.sessions), self.throttle)
            if result is not None and result.status == 200:
                texts.append(result.body.decode(result.charset or "utf-8", errors="replace"))
        return texts

    def measure(self, url: str) -> Tuple[Dict[MetricId, Optional[float]], Dict[str, str], FetchResult]:
        """
        Measure every fetch and on-page metric of one URL.

        Returns:
            (measured values, probe errors, home FetchResult)

        Raises:
            FetchError: If the home page itself cannot be fetched.
        """
        errors: Dict[str, str] = {}
        home = fetch_page(url, self.policy, session_for(self.sessions), self.throttle)
        logger.info(f"Fetched {url} -> {home.final_url} [{home.status}] in {home.load_time_ms:.0f} ms")

        doc = parse_html(home.body, home.charset)
        onpage = extract_onpage(doc, home.final_url, self.config.audit.social_domains)
        subresources = extract_subresources(doc, home.final_url)
        stylesheets = self._stylesheets(extract_stylesheet_urls(doc, home.final_url), errors)
        lint = lint_markup(home.body, doc, stylesheets)

        measured: Dict[MetricId, Optional[float]] = {}
        measured.update(onpage.as_metrics())
        measured.update(lint.as_metrics())
        measured.update(fetch_metrics(home, subresources))

        origin = origin_of(home.final_url)
        session = session_for(self.sessions)
        args = (self.policy, session, self.throttle)
        robots = self._probe("robots_txt", errors, check_robots, origin, *args)
        sitemap = self._probe("sitemap", errors, check_sitemap, origin, *args)
        page_404 = self._probe("page_404", errors, check_custom_404, origin, *args, gate=self.gate)
        links = self._probe("broken_links", errors, probe_broken_links,
                            extract_link_urls(doc, home.final_url), self.policy, self.sessions,
                            self.throttle, gate=self.gate)

        measured[MetricId.ROBOTS_TXT] = None if robots is None else float(robots)
        measured[MetricId.SITEMAP] = None if sitemap is None else float(sitemap)
        measured[MetricId.PAGE_404] = None if page_404 is None else float(page_404)
        measured[MetricId.BROKEN_LINKS] = None if links is None else float(links.broken)
        return measured, errors, home

    def audit_url(self, url: str, domain: Optional[str] = None) -> AuditReport:
        """
        Audit a single URL and merge provider metrics.

        Args:
            url: Absolute http(s) URL of the home page.
            domain: Domain used for provider lookups; derived from the URL when None.

        Raises:
            ValueError: If the URL is not absolute.
            FetchError: If the home page cannot be fetched.
        """
        validate_url(url)
        fetched_at = datetime.now(timezone.utc)
        measured, errors, home = self.measure(url)
        domain = domain or normalise_domain(url)
        collected = collect(domain, self.provider, measured, self.registry)
        return AuditReport(
            url=url,
            domain=domain,
            fetched_at=fetched_at,
            final_url=home.final_url,
            status=home.status,
            metrics=collected.values,
            provenance=collected.provenance,
            errors=errors,
        )

    def _candidate_urls(self, entry: SiteEntry) -> List[str]:
        if entry.url:
            return [entry.url]
        primary = self.config.audit.default_scheme
        fallback = "http" if primary == "https" else "https"
        return [f"{primary}://{entry.domain}/", f"{fallback}://{entry.domain}/"]

    def audit_entry(self, entry: SiteEntry) -> AuditReport:
        """
        Audit one sites-file entry; a site that cannot be fetched still yields a report
        whose measured slots are missing.
        """
        domain = normalise_domain(entry.domain)
        errors: Dict[str, str] = {}
        for url in self._candidate_urls(entry):
            try:
                validate_url(url)
            except ValueError as e:
                logger.error(f"Skipping {url}: {e}")
                errors[url] = str(e)
                break
            try:
                return self.audit_url(url, domain)
            except (TlsError, ConnectionFailure, FetchTimeout) as e:
                logger.warning(f"{url} failed ({type(e).__name__}); trying next scheme")
                errors[url] = str(e)
            except FetchError as e:
                logger.error(f"Could not fetch {url}: {e}")
                errors[url] = str(e)
                break

        collected = collect(domain, self.provider, {}, self.registry)
        return AuditReport(
            url=self._candidate_urls(entry)[0],
            domain=domain,
            fetched_at=datetime.now(timezone.utc),
            metrics=collected.values,
            provenance=collected.provenance,
            errors=errors,
        )

    def collect_sites(self, entries: Sequence[SiteEntry],
                      show_progress: Optional[bool] = None) -> Tuple[Dataset, List[AuditReport]]:
        """
        Audit many sites concurrently and assemble a dataset in input order.

        Args:
            entries: Sites with their Webometric ranks
            show_progress: Show a tqdm progress bar (defaults to SHOW_PROGRESS)

        Returns:
            (dataset, per-site audit reports)
        """
        show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress
        reports: List[Optional[AuditReport]] = [None] * len(entries)

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.policy.max_concurrent) as executor:
            futures = {executor.submit(self.audit_entry, entry): i for i, entry in enumerate(entries)}
            progress = tqdm(concurrent.futures.as_completed(futures), total=len(futures),
                            desc="Auditing sites", disable=not show_progress)
            for future in progress:
                reports[futures[future]] = future.result()

        records = [
            SiteRecord(domain=entry.domain, webometric_rank=entry.webometric_rank, values=report.metrics)
            for entry, report in zip(entries, reports)
        ]
        failed = sum(1 for r in reports if r.status is None)
        logger.info(f"Collected {len(records)} sites ({failed} unreachable)")
        return Dataset(records=tuple(records), registry=self.registry), reports
