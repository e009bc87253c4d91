"""Run configuration models."""
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core import constants


class FetchPolicy(BaseModel):
    """Limits and manners for every HTTP request we make."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    timeout_ms: int = Field(constants.DEFAULT_TIMEOUT_MS, gt=0)
    max_redirects: int = Field(constants.DEFAULT_MAX_REDIRECTS, ge=0)
    max_body_kb: int = Field(constants.DEFAULT_MAX_BODY_KB, gt=0)
    user_agent: str = constants.DEFAULT_USER_AGENT
    max_concurrent: int = Field(constants.DEFAULT_MAX_CONCURRENT, ge=1)
    per_host_delay_ms: int = Field(constants.DEFAULT_PER_HOST_DELAY_MS, ge=0)
    broken_link_sample: int = Field(constants.DEFAULT_BROKEN_LINK_SAMPLE, ge=0)
    respect_robots: bool = True
    # True, False, or a CA bundle path
    verify_tls: Union[bool, str] = True

    @property
    def timeout_seconds(self) -> float:
        return self.timeout_ms / 1000.0

    @property
    def max_body_bytes(self) -> int:
        return self.max_body_kb * 1024


class AnalysisSettings(BaseModel):
    """Distribution screen and log-transform settings."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    log_shift: float = Field(constants.DEFAULT_LOG_SHIFT, gt=0)
    max_abs_skew: float = Field(constants.DEFAULT_MAX_ABS_SKEW, gt=0)
    max_abs_kurtosis: float = Field(constants.DEFAULT_MAX_ABS_KURTOSIS, gt=0)


class MiningSettings(BaseModel):
    """Feature selection, discretization and rule thresholds."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    bins: int = Field(constants.DEFAULT_BINS, ge=2)
    binning: Literal["equal-width", "quantile"] = "equal-width"
    min_support_pct: float = Field(constants.DEFAULT_MIN_SUPPORT_PCT, gt=0, le=100)
    min_confidence_pct: float = Field(constants.DEFAULT_MIN_CONFIDENCE_PCT, ge=0, le=100)
    top_n: int = Field(constants.DEFAULT_TOP_N, ge=0)
    feature_k: int = Field(constants.DEFAULT_FEATURE_K, ge=1)
    max_antecedent: int = Field(constants.DEFAULT_MAX_ANTECEDENT, ge=1)
    include_missing_items: bool = False


class AuditSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    social_domains: List[str] = Field(default_factory=lambda: list(constants.DEFAULT_SOCIAL_DOMAINS))
    max_stylesheets: int = Field(constants.MAX_STYLESHEETS, ge=0)
    default_scheme: Literal["https", "http"] = constants.DEFAULT_SCHEME

    @field_validator("social_domains", mode="after")
    @classmethod
    def _normalise_domains(cls, domains: List[str]) -> List[str]:
        return [d.strip().lower() for d in domains if d.strip()]


class ProviderSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fixtures: List[str] = Field(default_factory=list)
    search_fixture: Optional[str] = None
    live_search: bool = False


class RunConfig(BaseModel):
    """Everything a run needs, loadable from and writable to TOML."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    fetch: FetchPolicy = Field(default_factory=FetchPolicy)
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    mining: MiningSettings = Field(default_factory=MiningSettings)
    audit: AuditSettings = Field(default_factory=AuditSettings)
    providers: ProviderSettings = Field(default_factory=ProviderSettings)

    def with_overrides(self, **sections) -> "RunConfig":
        """Copy with per-section field overrides; None values are ignored.

        Example:
            ``config.with_overrides(mining={"bins": 3})``
        """
        updates = {}
        for section, fields in sections.items():
            fields = {k: v for k, v in (fields or {}).items() if v is not None}
            if not fields:
                continue
            current = getattr(self, section)
            updates[section] = current.model_validate({**current.model_dump(), **fields})
        return self.model_copy(update=updates) if updates else self
