"""Offline provider backed by a JSON fixture file."""
import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Mapping, Optional

from ..core.errors import FixtureLoadError
from ..models.audit_models import ProviderResponse
from ..models.metric_models import MetricId, MetricKey, MetricSource
from .base import BaseProvider, ProviderCategory, ProviderMetadata, normalise_domain
from .registry import ProviderRegistry

logger = logging.getLogger(__name__)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@ProviderRegistry.register
class FixtureProvider(BaseProvider):
    """Answers from a mapping ``domain -> {metric_id: value or null}``.

    A null value is an explicit unavailable entry; a missing domain or metric
    is unavailable as well. Identical fixture content gives identical answers.
    """

    METADATA = ProviderMetadata(
        name="fixture",
        version="1.0.0",
        description="Off-page metrics from a JSON fixture file",
        category=ProviderCategory.FIXTURE,
    )

    def __init__(self, entries: Mapping[str, Mapping[str, Any]], source_name: str = "fixture",
                 retrieved_at: Optional[datetime] = None):
        self.source_name = source_name
        self.retrieved_at = retrieved_at or EPOCH
        self._entries = self._validate(entries)

    @property
    def metadata(self) -> ProviderMetadata:
        return self.METADATA

    def _validate(self, entries: Mapping[str, Mapping[str, Any]]) -> Dict[str, Dict[MetricId, Optional[float]]]:
        if not isinstance(entries, Mapping):
            raise FixtureLoadError("top level must be an object keyed by domain")
        validated: Dict[str, Dict[MetricId, Optional[float]]] = {}
        for domain, metrics in entries.items():
            key = normalise_domain(str(domain))
            if key in validated:
                raise FixtureLoadError("duplicate domain after normalisation", entry=str(domain))
            if not isinstance(metrics, Mapping):
                raise FixtureLoadError("value must be an object of metric values", entry=str(domain))
            values: Dict[MetricId, Optional[float]] = {}
            for name, value in metrics.items():
                entry = f"{domain}.{name}"
                if name not in self.registry:
                    raise FixtureLoadError("unknown metric", entry=entry)
                descriptor = self.registry.get(name)
                if descriptor.source != MetricSource.PROVIDER:
                    raise FixtureLoadError(f"{descriptor.source.value} metric cannot come from a fixture",
                                           entry=entry)
                if value is None:
                    values[descriptor.id] = None
                    continue
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise FixtureLoadError(f"value must be a number or null, got {value!r}", entry=entry)
                problem = descriptor.check_value(float(value))
                if problem is not None:
                    raise FixtureLoadError(problem[1], entry=entry)
                values[descriptor.id] = float(value)
            validated[key] = values
        return validated

    @classmethod
    def from_path(cls, path: str) -> "FixtureProvider":
        return _load_fixture(path)

    def domains(self):
        return sorted(self._entries)

    def get(self, domain: str, metric: MetricKey) -> ProviderResponse:
        metric_id = self.check_metric(metric)
        value = self._entries.get(normalise_domain(domain), {}).get(metric_id)
        return ProviderResponse(metric=metric_id, value=value, source_name=self.source_name,
                                retrieved_at=self.retrieved_at)


def fixture_provider(path: str) -> FixtureProvider:
    """Load a fixture JSON file into a provider."""
    return FixtureProvider.from_path(path)


def _load_fixture(path: str) -> FixtureProvider:
    """Read, parse and validate a fixture file.

    Raises:
        FixtureLoadError: If the file cannot be read, is not JSON, or has a bad entry.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            entries = json.load(f)
        mtime = datetime.fromtimestamp(os.path.getmtime(path), tz=timezone.utc)
    except OSError as e:
        raise FixtureLoadError(f"cannot read fixture: {e}", entry=path) from e
    except json.JSONDecodeError as e:
        raise FixtureLoadError(f"invalid JSON at line {e.lineno}: {e.msg}", entry=path) from e

    provider = FixtureProvider(entries, source_name=f"fixture:{os.path.basename(path)}", retrieved_at=mtime)
    logger.info(f"Loaded fixture {path} with {len(provider.domains())} domains")
    return provider
