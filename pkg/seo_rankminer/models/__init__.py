# Models package

from .metric_models import (
    MetricId,
    MetricKind,
    MetricSource,
    MetricDescriptor,
    MetricRegistry,
    builtin_registry
)
from .dataset_models import SiteRecord, SiteEntry, Dataset, Violation
from .config_models import RunConfig, FetchPolicy, AnalysisSettings, MiningSettings
