"""High-level API for SEO RankMiner."""
from typing import Any, Dict, List, Optional, Union

from .client import RankMinerClient
from .core.dataset_io import load_dataset
from .models.analysis_models import ImpactTable, MiningResult
from .models.config_models import RunConfig
from .models.dataset_models import Dataset

# Global instances for reuse
_client = None
_config = None


def configure(run_config: Optional[RunConfig] = None, config_path: Optional[str] = None):
    """
    Configure the shared client.

    Args:
        run_config: Configuration to use.
        config_path: TOML config file, used when run_config is None.
    """
    global _client, _config
    _config = run_config
    _client = RankMinerClient(run_config, config_path) if (run_config or config_path) else None


def _get_client() -> RankMinerClient:
    """Get or initialize the shared client."""
    global _client
    if _client is None:
        _client = RankMinerClient(_config)
    return _client


def _as_dataset(dataset: Union[Dataset, str]) -> Dataset:
    return load_dataset(dataset) if isinstance(dataset, str) else dataset


def audit_url(url: str) -> Dict[str, Any]:
    """
    Audit one home page.

    Returns:
        The audit report as a JSON-ready dictionary.
    """
    return _get_client().audit(url).model_dump(mode="json")


def impact_report(dataset: Union[Dataset, str]) -> ImpactTable:
    """Impact table for a dataset or dataset CSV path."""
    return _get_client().impact(_as_dataset(dataset))


def mine_dataset(dataset: Union[Dataset, str]) -> MiningResult:
    """Association rules for a dataset or dataset CSV path."""
    return _get_client().mine(_as_dataset(dataset))


def list_all_providers() -> List[Dict[str, Any]]:
    """List all registered provider kinds."""
    return RankMinerClient.list_providers()
