"""Pluggable off-page metric providers."""
from .base import BaseProvider, ProviderCategory, ProviderMetadata, normalise_domain
from .registry import ProviderRegistry
from .fixture import FixtureProvider, fixture_provider
from .composite import CompositeProvider, composite
from .search import (
    FixtureSearchClient,
    GoogleCustomSearchClient,
    SearchClient,
    SearchIndexProvider,
    indexed_pages_query,
)
from .collector import build_provider_chain, collect
