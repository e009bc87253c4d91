"""Indexed-page counts from a search engine's site: query."""
import json
import logging
from abc import ABC, abstractmethod
from typing import Any, Mapping, Optional

import requests

from ..core import config
from ..core.errors import FixtureLoadError, ProviderPreconditionError, ProviderTransportError
from ..models.audit_models import ProviderResponse
from ..models.config_models import FetchPolicy
from ..models.metric_models import MetricId, MetricKey
from .base import BaseProvider, ProviderCategory, ProviderMetadata, normalise_domain
from .registry import ProviderRegistry

logger = logging.getLogger(__name__)


class SearchClient(ABC):
    """Reports how many pages a search engine has indexed for a domain."""

    name: str = "search"

    @abstractmethod
    def site_count(self, domain: str) -> Optional[int]:
        """Result count for ``site:<domain>``; None when the engine has no answer.

        Raises:
            ProviderTransportError: When the engine cannot be reached.
        """
        pass


class FixtureSearchClient(SearchClient):
    """Offline search client answering from a ``{domain: count}`` mapping."""

    name = "search-fixture"

    def __init__(self, counts: Mapping[str, Any]):
        self._counts = {}
        for domain, count in counts.items():
            if count is not None and (isinstance(count, bool) or not isinstance(count, int) or count < 0):
                raise FixtureLoadError(f"count must be a non-negative integer or null, got {count!r}",
                                       entry=str(domain))
            self._counts[normalise_domain(str(domain))] = count

    @classmethod
    def from_file(cls, path: str) -> "FixtureSearchClient":
        try:
            with open(path, "r", encoding="utf-8") as f:
                counts = json.load(f)
        except OSError as e:
            raise FixtureLoadError(f"cannot read search fixture: {e}", entry=path) from e
        except json.JSONDecodeError as e:
            raise FixtureLoadError(f"invalid JSON at line {e.lineno}: {e.msg}", entry=path) from e
        if not isinstance(counts, Mapping):
            raise FixtureLoadError("top level must be an object keyed by domain", entry=path)
        return cls(counts)

    def site_count(self, domain: str) -> Optional[int]:
        return self._counts.get(normalise_domain(domain))


class GoogleCustomSearchClient(SearchClient):
    """Live client for the Custom Search JSON API.

    Credentials come from GOOGLE_CSE_API_KEY and GOOGLE_CSE_ENGINE_ID.
    """

    name = "google-cse"
    ENDPOINT = "https://www.googleapis.com/customsearch/v1"

    def __init__(self, api_key: Optional[str] = None, engine_id: Optional[str] = None,
                 policy: Optional[FetchPolicy] = None, session: Optional[requests.Session] = None):
        self.api_key = api_key or config.GOOGLE_CSE_API_KEY
        self.engine_id = engine_id or config.GOOGLE_CSE_ENGINE_ID
        if not self.api_key or not self.engine_id:
            raise ProviderPreconditionError(
                "GOOGLE_CSE_API_KEY and GOOGLE_CSE_ENGINE_ID must be set for live search")
        self.policy = policy or FetchPolicy()
        self.session = session or requests.Session()

    def site_count(self, domain: str) -> Optional[int]:
        params = {"key": self.api_key, "cx": self.engine_id, "q": f"site:{normalise_domain(domain)}", "num": 1}
        try:
            response = self.session.get(self.ENDPOINT, params=params, timeout=self.policy.timeout_seconds)
        except requests.RequestException as e:
            raise ProviderTransportError(f"search request failed for {domain}: {e}") from e
        if response.status_code in (401, 403):
            raise ProviderTransportError(f"search API rejected credentials ({response.status_code})")
        if response.status_code != 200:
            raise ProviderTransportError(f"search API answered {response.status_code} for {domain}")
        try:
            total = response.json()["searchInformation"]["totalResults"]
        except (ValueError, KeyError, TypeError):
            logger.warning(f"No result count in search response for {domain}")
            return None
        return int(total)


def indexed_pages_query(domain: str, search_client: SearchClient) -> Optional[int]:
    """Indexed page count for a domain, or None when the client has no answer.

    Raises:
        ProviderTransportError: On search transport failure (never reported as 0).
    """
    return search_client.site_count(domain)


@ProviderRegistry.register
class SearchIndexProvider(BaseProvider):
    """Provides indexed_pages from a search client; other metrics are unavailable."""

    METADATA = ProviderMetadata(
        name="search",
        version="1.0.0",
        description="Indexed pages via a site: search (fixture or Custom Search API)",
        category=ProviderCategory.SEARCH,
        credentials_env="GOOGLE_CSE_API_KEY, GOOGLE_CSE_ENGINE_ID",
    )

    def __init__(self, client: SearchClient):
        self.client = client

    @property
    def metadata(self) -> ProviderMetadata:
        return self.METADATA

    def get(self, domain: str, metric: MetricKey) -> ProviderResponse:
        metric_id = self.check_metric(metric)
        if metric_id != MetricId.INDEXED_PAGES:
            return ProviderResponse.unavailable(metric_id, self.client.name)
        count = indexed_pages_query(domain, self.client)
        return ProviderResponse(metric=metric_id, value=None if count is None else float(count),
                                source_name=self.client.name)
