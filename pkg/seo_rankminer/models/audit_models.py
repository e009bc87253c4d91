"""Models produced by fetching, auditing and provider lookups."""
import json
from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .metric_models import MetricId


class FetchResult(BaseModel):
    """Outcome of one successful page fetch."""
    model_config = ConfigDict(frozen=True)

    requested_url: str
    final_url: str
    status: int
    body: bytes = b""
    load_time_ms: float
    gzip: bool = False
    https: bool = False
    headers: Dict[str, str] = Field(default_factory=dict)
    truncated: bool = False
    redirects: int = 0

    @property
    def content_type(self) -> str:
        return self.headers.get("content-type", "")

    @property
    def charset(self) -> Optional[str]:
        """Charset parameter of the Content-Type header, if any."""
        for part in self.content_type.split(";")[1:]:
            key, _, value = part.partition("=")
            if key.strip().lower() == "charset" and value.strip():
                return value.strip().strip('"').lower()
        return None


class BrokenLinkReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    checked: int
    broken: int
    broken_urls: Tuple[str, ...] = ()


class OnPageMetrics(BaseModel):
    """Metrics extracted from the home page markup alone."""
    model_config = ConfigDict(frozen=True)

    title_chars: int = 0
    meta_description_chars: int = 0
    h1_count: int = 0
    img_without_alt: int = 0
    iframe_count: int = 0
    embed_object_count: int = 0
    doctype: bool = False
    encoding_declared: bool = False
    language_english: bool = False
    responsive: bool = False
    internal_links: int = 0
    external_links: int = 0
    total_links: int = 0
    social_media: int = 0

    @model_validator(mode="after")
    def _links_add_up(self) -> "OnPageMetrics":
        if self.total_links != self.internal_links + self.external_links:
            raise ValueError("total_links must equal internal_links + external_links")
        return self

    def as_metrics(self) -> Dict[MetricId, float]:
        """Flatten to metric slots (booleans as 0/1)."""
        return {MetricId(name): float(value) for name, value in self.model_dump().items()}


class LintFinding(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str
    severity: str
    message: str


class LintReport(BaseModel):
    """Markup and stylesheet lint counts under a fixed, versioned rule set."""
    model_config = ConfigDict(frozen=True)

    ruleset_version: str
    html_errors: int = 0
    html_warnings: int = 0
    css_errors: int = 0
    css_warnings: int = 0
    findings: Tuple[LintFinding, ...] = ()

    def as_metrics(self) -> Dict[MetricId, float]:
        return {
            MetricId.HTML_ERRORS: float(self.html_errors),
            MetricId.HTML_WARNINGS: float(self.html_warnings),
            MetricId.CSS_ERRORS: float(self.css_errors),
            MetricId.CSS_WARNINGS: float(self.css_warnings),
        }


class Provenance(str, Enum):
    MEASURED = "measured"
    PROVIDER = "provider"
    MISSING = "missing"


class ProviderResponse(BaseModel):
    """One provider answer; value None means unavailable."""
    model_config = ConfigDict(frozen=True)

    metric: MetricId
    value: Optional[float] = None
    source_name: str
    retrieved_at: Optional[datetime] = None

    @property
    def available(self) -> bool:
        return self.value is not None

    @classmethod
    def unavailable(cls, metric: MetricId, source_name: str,
                    retrieved_at: Optional[datetime] = None) -> "ProviderResponse":
        return cls(metric=metric, value=None, source_name=source_name, retrieved_at=retrieved_at)


class CollectedMetrics(BaseModel):
    """Merged metric slots for one site with per-slot provenance."""
    model_config = ConfigDict(frozen=True)

    domain: str
    values: Dict[MetricId, Optional[float]]
    provenance: Dict[MetricId, Provenance]
    sources: Dict[MetricId, str] = Field(default_factory=dict)

    def missing(self) -> List[MetricId]:
        return [m for m, p in self.provenance.items() if p == Provenance.MISSING]


class AuditReport(BaseModel):
    """Everything measured for one URL, serializable as JSON."""
    model_config = ConfigDict(frozen=True)

    url: str
    domain: str
    fetched_at: Optional[datetime] = None
    final_url: Optional[str] = None
    status: Optional[int] = None
    metrics: Dict[MetricId, Optional[float]]
    provenance: Dict[MetricId, Provenance]
    errors: Dict[str, str] = Field(default_factory=dict)

    def to_json(self, include_timestamp: bool = True) -> str:
        data = self.model_dump(mode="json")
        if not include_timestamp:
            data["fetched_at"] = None
        return json.dumps(data, indent=2, sort_keys=False) + "\n"
