"""Client interface for SEO RankMiner."""
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .analysis.miner import mine_rules
from .analysis.stats import impact_table, scatter_export
from .core.config import load_run_config
from .core.dataset_io import load_dataset, validate_dataset
from .core.site_processor import SiteAuditor
from .core.utils.file_utils import read_sites_file
from .models.analysis_models import ImpactTable, MiningResult
from .models.audit_models import AuditReport
from .models.config_models import RunConfig
from .models.dataset_models import Dataset, SiteEntry, Violation
from .models.metric_models import MetricKey
from .providers.base import BaseProvider
from .providers.collector import build_provider_chain
from .providers.registry import ProviderRegistry


class RankMinerClient:
    """Client for collecting SEO metrics and analysing them against Webometric rank.

    Providers and the site auditor are built lazily, so analysis-only use never
    touches fixtures or the network.
    """

    def __init__(self, run_config: Optional[RunConfig] = None, config_path: Optional[str] = None):
        """
        Initialize the client.

        Args:
            run_config: Explicit configuration. Takes precedence over config_path.
            config_path: TOML file to load; falls back to SEO_RANKMINER_CONFIG, then defaults.
        """
        self.config = run_config or load_run_config(config_path)
        self._provider: Optional[BaseProvider] = None
        self._auditor: Optional[SiteAuditor] = None

    @property
    def provider(self) -> BaseProvider:
        if self._provider is None:
            self._provider = build_provider_chain(self.config.providers)
        return self._provider

    @property
    def auditor(self) -> SiteAuditor:
        if self._auditor is None:
            self._auditor = SiteAuditor(self.config, provider=self.provider)
        return self._auditor

    def audit(self, url: str) -> AuditReport:
        """Audit one URL: fetch, on-page extraction, lint, probes and providers."""
        return self.auditor.audit_url(url)

    def collect(self, sites: Sequence[SiteEntry], show_progress: Optional[bool] = None) -> Tuple[Dataset, List[AuditReport]]:
        """Audit a list of sites into a dataset; unreachable sites keep missing slots."""
        return self.auditor.collect_sites(sites, show_progress)

    def collect_file(self, sites_path: str, show_progress: Optional[bool] = None) -> Tuple[Dataset, List[AuditReport]]:
        return self.collect(read_sites_file(sites_path), show_progress)

    @staticmethod
    def load(dataset_path: str) -> Tuple[Dataset, List[Violation]]:
        """Load a dataset CSV and validate it."""
        dataset = load_dataset(dataset_path)
        return dataset, validate_dataset(dataset)

    def impact(self, dataset: Dataset) -> ImpactTable:
        return impact_table(dataset, self.config.analysis)

    def scatter(self, dataset: Dataset, metric: MetricKey) -> bytes:
        return scatter_export(dataset, metric, self.config.analysis)

    def mine(self, dataset: Dataset) -> MiningResult:
        return mine_rules(dataset, self.config.mining, self.config.analysis)

    @staticmethod
    def list_providers() -> List[Dict[str, Any]]:
        """Metadata of every registered provider kind."""
        return ProviderRegistry.describe()
