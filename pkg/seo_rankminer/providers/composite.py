"""Ordered fallback over several providers."""
import logging
from typing import Sequence

from ..models.audit_models import ProviderResponse
from ..models.metric_models import MetricKey
from .base import BaseProvider, ProviderCategory, ProviderMetadata
from .registry import ProviderRegistry

logger = logging.getLogger(__name__)


@ProviderRegistry.register
class CompositeProvider(BaseProvider):
    """Asks each provider in turn and returns the first available answer."""

    METADATA = ProviderMetadata(
        name="composite",
        version="1.0.0",
        description="First available answer from an ordered provider list",
        category=ProviderCategory.COMPOSITE,
    )

    def __init__(self, providers: Sequence[BaseProvider]):
        self.providers = list(providers)

    @property
    def metadata(self) -> ProviderMetadata:
        return self.METADATA

    def initialize(self) -> None:
        for provider in self.providers:
            provider.initialize()

    def get(self, domain: str, metric: MetricKey) -> ProviderResponse:
        metric_id = self.check_metric(metric)
        for provider in self.providers:
            response = provider.get(domain, metric_id)
            if response.available:
                return response
        return ProviderResponse.unavailable(metric_id, self.METADATA.name)


def composite(providers: Sequence[BaseProvider]) -> CompositeProvider:
    """Combine providers in priority order; an empty list is always unavailable."""
    return CompositeProvider(providers)
