"""Merging measured values with provider answers."""
import logging
from typing import Dict, List, Mapping, Optional

from ..core.errors import ProviderError
from ..models.audit_models import CollectedMetrics, Provenance
from ..models.config_models import ProviderSettings
from ..models.metric_models import MetricId, MetricRegistry, MetricSource, builtin_registry
from .base import BaseProvider
from .composite import composite
from .registry import ProviderRegistry
from .search import FixtureSearchClient, GoogleCustomSearchClient

logger = logging.getLogger(__name__)


def build_provider_chain(settings: Optional[ProviderSettings] = None) -> BaseProvider:
    """Composite over configured fixtures (in order) then the search provider, if any."""
    settings = settings or ProviderSettings()
    providers: List[BaseProvider] = []

    fixture_cls = ProviderRegistry.get_provider("fixture")
    for path in settings.fixtures:
        providers.append(fixture_cls.from_path(path))

    search_cls = ProviderRegistry.get_provider("search")
    if settings.search_fixture:
        providers.append(search_cls(FixtureSearchClient.from_file(settings.search_fixture)))
    if settings.live_search:
        providers.append(search_cls(GoogleCustomSearchClient()))

    chain = composite(providers)
    chain.initialize()
    logger.info(f"Provider chain: {', '.join(p.metadata.name for p in providers) or 'empty'}")
    return chain


def collect(domain: str, provider: Optional[BaseProvider],
            measured: Optional[Mapping[MetricId, Optional[float]]] = None,
            registry: Optional[MetricRegistry] = None) -> CollectedMetrics:
    """Fill every registry slot for a site.

    Measured values always win. Provider-sourced slots without a measured value
    are asked of the provider; anything still empty is missing. Provider errors
    are logged and leave the slot missing.
    """
    registry = registry or builtin_registry()
    measured = measured or {}
    values: Dict[MetricId, Optional[float]] = {}
    provenance: Dict[MetricId, Provenance] = {}
    sources: Dict[MetricId, str] = {}

    for descriptor in registry:
        metric_id = descriptor.id
        value = measured.get(metric_id)
        if value is not None:
            values[metric_id] = float(value)
            provenance[metric_id] = Provenance.MEASURED
            continue

        if provider is not None and descriptor.source == MetricSource.PROVIDER:
            try:
                response = provider.get(domain, metric_id)
            except ProviderError as e:
                logger.warning(f"Provider failed for {domain} {metric_id.value}: {e}")
            else:
                if response.available:
                    values[metric_id] = response.value
                    provenance[metric_id] = Provenance.PROVIDER
                    sources[metric_id] = response.source_name
                    continue

        values[metric_id] = None
        provenance[metric_id] = Provenance.MISSING

    return CollectedMetrics(domain=domain, values=values, provenance=provenance, sources=sources)
