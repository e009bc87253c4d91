"""
SEO RankMiner - how SEO parameters relate to Webometric rank

Audits home pages for on-page, markup and fetch metrics, merges off-page provider
metrics, then scores each metric's impact on rank and mines association rules.
"""

__version__ = "0.1.0"

# Export the client class
from .client import RankMinerClient

# Import high-level functions for direct use
from .api import (
    configure,
    audit_url,
    impact_report,
    mine_dataset,
    list_all_providers
)
