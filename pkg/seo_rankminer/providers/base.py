from abc import ABC, abstractmethod
from enum import Enum, auto
from typing import FrozenSet, Optional

from ..core.errors import ProviderPreconditionError
from ..models.audit_models import ProviderResponse
from ..models.metric_models import MetricId, MetricKey, MetricRegistry, MetricSource, builtin_registry


class ProviderCategory(Enum):
    """Categories of metric providers."""
    FIXTURE = auto()    # Offline, file-backed
    SEARCH = auto()     # Search-engine result counts
    COMPOSITE = auto()  # Ordered fallback over other providers


class ProviderMetadata:
    """Metadata for providers."""
    def __init__(self, name: str, version: str, description: str,
                 category: ProviderCategory = ProviderCategory.FIXTURE,
                 credentials_env: Optional[str] = None):
        self.name = name
        self.version = version
        self.description = description
        self.category = category
        self.credentials_env = credentials_env


class BaseProvider(ABC):
    """Base class for all off-page metric providers.

    Providers answer with a value or an explicit unavailable response and never
    invent values. Transport or credential problems raise ProviderError subclasses.
    """

    registry: MetricRegistry = builtin_registry()

    @property
    @abstractmethod
    def metadata(self) -> ProviderMetadata:
        """Return provider metadata."""
        pass

    def initialize(self) -> None:
        """Prepare the provider (open files, check credentials)."""
        pass

    @property
    def supported_metrics(self) -> FrozenSet[MetricId]:
        return frozenset(d.id for d in self.registry.by_source(MetricSource.PROVIDER))

    def check_metric(self, metric: MetricKey) -> MetricId:
        """Resolve a metric and enforce that it is provider-sourced.

        Raises:
            ProviderPreconditionError: For metrics measured on the site itself.
        """
        descriptor = self.registry.get(metric)
        if descriptor.source != MetricSource.PROVIDER:
            raise ProviderPreconditionError(
                f"{descriptor.id.value} is a {descriptor.source.value} metric, not provider-sourced")
        return descriptor.id

    @abstractmethod
    def get(self, domain: str, metric: MetricKey) -> ProviderResponse:
        """
        Look up one metric for one domain.

        Args:
            domain: Site domain, e.g. "harvard.edu".
            metric: A provider-sourced metric id.

        Returns:
            The response; ``value`` is None when unavailable.
        """
        pass


def normalise_domain(domain: str) -> str:
    """Lowercase host without scheme, port, path or leading 'www.'."""
    domain = domain.strip().lower()
    if "://" in domain:
        domain = domain.split("://", 1)[1]
    domain = domain.split("/", 1)[0].split(":", 1)[0]
    return domain[4:] if domain.startswith("www.") else domain
