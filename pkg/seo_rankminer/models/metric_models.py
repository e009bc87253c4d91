"""Metric identifiers, descriptors and the metric registry."""
import math
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator


class MetricId(str, Enum):
    """The 38 SEO parameters, in canonical column order."""
    ALEXA_RANK = "alexa_rank"
    BACKLINKS = "backlinks"
    TOTAL_LINKS = "total_links"
    INTERNAL_LINKS = "internal_links"
    EXTERNAL_LINKS = "external_links"
    BROKEN_LINKS = "broken_links"
    TRUST_FLOW = "trust_flow"
    REQUEST_COUNT = "request_count"
    LOAD_TIME_MS = "load_time_ms"
    H1_COUNT = "h1_count"
    IMG_WITHOUT_ALT = "img_without_alt"
    IFRAME_COUNT = "iframe_count"
    EMBED_OBJECT_COUNT = "embed_object_count"
    HTML_ERRORS = "html_errors"
    HTML_WARNINGS = "html_warnings"
    CSS_ERRORS = "css_errors"
    CSS_WARNINGS = "css_warnings"
    TITLE_CHARS = "title_chars"
    META_DESCRIPTION_CHARS = "meta_description_chars"
    PAGE_SIZE_KB = "page_size_kb"
    ENCODING_DECLARED = "encoding_declared"
    ROBOTS_TXT = "robots_txt"
    SITEMAP = "sitemap"
    RESPONSIVE = "responsive"
    SOCIAL_MEDIA = "social_media"
    INDEXED_PAGES = "indexed_pages"
    LANGUAGE_ENGLISH = "language_english"
    DOCTYPE = "doctype"
    PAGE_404 = "page_404"
    GZIP = "gzip"
    REFERRING_DOMAINS = "referring_domains"
    REFERRING_IPS = "referring_ips"
    SECURITY = "security"
    PERFORMANCE = "performance"
    ACCESSIBILITY = "accessibility"
    PAGE_RANK = "page_rank"
    DOMAIN_AUTHORITY = "domain_authority"
    PAGE_AUTHORITY = "page_authority"


class MetricKind(str, Enum):
    NUMERIC = "numeric"
    BOOLEAN = "boolean"


class MetricSource(str, Enum):
    """Where a metric value comes from."""
    FETCH = "fetch"
    ONPAGE = "onpage"
    PROVIDER = "provider"


class MetricScale(str, Enum):
    COUNT = "count"
    MILLISECONDS = "milliseconds"
    KILOBYTES = "kilobytes"
    RANK_POSITION = "rank-position"
    SCORE_0_100 = "score-0-100"
    SCORE_0_10 = "score-0-10"
    FLAG = "flag"


class TransformPolicy(str, Enum):
    NEVER_LOG = "never-log"
    LOG_CANDIDATE = "log-candidate"


# scale -> (lower bound, upper bound); None means unbounded
_SCALE_BOUNDS: Dict[MetricScale, Tuple[Optional[float], Optional[float]]] = {
    MetricScale.COUNT: (0.0, None),
    MetricScale.MILLISECONDS: (0.0, None),
    MetricScale.KILOBYTES: (0.0, None),
    MetricScale.RANK_POSITION: (1.0, None),
    MetricScale.SCORE_0_100: (0.0, 100.0),
    MetricScale.SCORE_0_10: (0.0, 10.0),
    MetricScale.FLAG: (0.0, 1.0),
}


class MetricDescriptor(BaseModel):
    """Static description of one metric."""
    model_config = ConfigDict(frozen=True)

    id: MetricId
    label: str
    short_label: str
    kind: MetricKind
    source: MetricSource
    scale: MetricScale
    transform_policy: TransformPolicy

    @model_validator(mode="after")
    def _booleans_never_log(self) -> "MetricDescriptor":
        if self.kind == MetricKind.BOOLEAN and self.transform_policy != TransformPolicy.NEVER_LOG:
            raise ValueError(f"boolean metric {self.id.value} must be never-log")
        if self.kind == MetricKind.BOOLEAN and self.scale != MetricScale.FLAG:
            raise ValueError(f"boolean metric {self.id.value} must use the flag scale")
        return self

    @property
    def is_boolean(self) -> bool:
        return self.kind == MetricKind.BOOLEAN

    def check_value(self, value: float) -> Optional[Tuple[str, str]]:
        """Check a present value against this metric's kind and scale.

        Returns:
            None when the value is acceptable, otherwise a ``(rule, message)`` pair.
        """
        if not math.isfinite(value):
            return "value-finite", f"{self.id.value} must be finite, got {value!r}"
        if self.kind == MetricKind.BOOLEAN:
            if value not in (0.0, 1.0):
                return "value-flag", f"{self.id.value} must be 0 or 1, got {value:g}"
            return None
        low, high = _SCALE_BOUNDS[self.scale]
        if low is not None and value < low:
            rule = "value-non-negative" if low == 0.0 else "value-scale"
            return rule, f"{self.id.value} must be >= {low:g}, got {value:g}"
        if high is not None and value > high:
            return "value-scale", f"{self.id.value} must be <= {high:g}, got {value:g}"
        return None


MetricKey = Union[MetricId, str]


class MetricRegistry:
    """Ordered, immutable collection of metric descriptors keyed by id."""

    def __init__(self, descriptors: Iterable[MetricDescriptor]):
        self._descriptors: Tuple[MetricDescriptor, ...] = tuple(descriptors)
        self._by_id: Dict[MetricId, MetricDescriptor] = {}
        for descriptor in self._descriptors:
            if descriptor.id in self._by_id:
                raise ValueError(f"Duplicate metric id in registry: {descriptor.id.value}")
            self._by_id[descriptor.id] = descriptor

    def __len__(self) -> int:
        return len(self._descriptors)

    def __iter__(self) -> Iterator[MetricDescriptor]:
        return iter(self._descriptors)

    def __contains__(self, key: object) -> bool:
        try:
            return MetricId(key) in self._by_id
        except ValueError:
            return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricRegistry):
            return NotImplemented
        return self._descriptors == other._descriptors

    def __hash__(self) -> int:
        return hash(self._descriptors)

    def __repr__(self) -> str:
        return f"MetricRegistry({len(self)} metrics)"

    def get(self, key: MetricKey) -> MetricDescriptor:
        """Look up a descriptor by id or id string.

        Raises:
            KeyError: If the metric is not registered.
        """
        try:
            return self._by_id[MetricId(key)]
        except ValueError:
            raise KeyError(f"Unknown metric: {key}") from None
        except KeyError:
            raise KeyError(f"Metric not in registry: {key}") from None

    def ids(self) -> List[MetricId]:
        return [d.id for d in self._descriptors]

    def by_source(self, source: MetricSource) -> List[MetricDescriptor]:
        return [d for d in self._descriptors if d.source == source]

    def position(self, key: MetricKey) -> int:
        """Registry order of a metric, used to break ties deterministically."""
        return self.ids().index(MetricId(key))


def _metric(metric_id, label, short_label, kind, source, scale, policy) -> MetricDescriptor:
    return MetricDescriptor(
        id=metric_id,
        label=label,
        short_label=short_label,
        kind=kind,
        source=source,
        scale=scale,
        transform_policy=policy,
    )


_N, _B = MetricKind.NUMERIC, MetricKind.BOOLEAN
_F, _O, _P = MetricSource.FETCH, MetricSource.ONPAGE, MetricSource.PROVIDER
_LOG, _NEVER = TransformPolicy.LOG_CANDIDATE, TransformPolicy.NEVER_LOG
_M = MetricId
_S = MetricScale

_BUILTIN = (
    _metric(_M.ALEXA_RANK, "Alexa rank", "Alexa rank", _N, _P, _S.RANK_POSITION, _LOG),
    _metric(_M.BACKLINKS, "Number of backlinks", "Backlinks", _N, _P, _S.COUNT, _LOG),
    _metric(_M.TOTAL_LINKS, "Total number of links", "Total links", _N, _O, _S.COUNT, _LOG),
    _metric(_M.INTERNAL_LINKS, "Number of internal links", "Internal links", _N, _O, _S.COUNT, _LOG),
    _metric(_M.EXTERNAL_LINKS, "Number of external links", "External links", _N, _O, _S.COUNT, _LOG),
    _metric(_M.BROKEN_LINKS, "Number of broken links", "Broken links", _N, _F, _S.COUNT, _LOG),
    _metric(_M.TRUST_FLOW, "Trust flow", "Trust flow", _N, _P, _S.SCORE_0_100, _LOG),
    _metric(_M.REQUEST_COUNT, "Number of requests", "Requests", _N, _F, _S.COUNT, _LOG),
    _metric(_M.LOAD_TIME_MS, "Load time", "Load time", _N, _F, _S.MILLISECONDS, _LOG),
    _metric(_M.H1_COUNT, "Number of H1 tags", "H1 tags", _N, _O, _S.COUNT, _LOG),
    _metric(_M.IMG_WITHOUT_ALT, "Images without alt attribute", "Images without alt", _N, _O, _S.COUNT, _LOG),
    _metric(_M.IFRAME_COUNT, "Number of iframes", "Iframes", _N, _O, _S.COUNT, _LOG),
    _metric(_M.EMBED_OBJECT_COUNT, "Number of embedded objects", "Embedded objects", _N, _O, _S.COUNT, _LOG),
    _metric(_M.HTML_ERRORS, "HTML errors", "HTML errors", _N, _O, _S.COUNT, _LOG),
    _metric(_M.HTML_WARNINGS, "HTML warnings", "HTML warnings", _N, _O, _S.COUNT, _LOG),
    _metric(_M.CSS_ERRORS, "CSS errors", "CSS errors", _N, _O, _S.COUNT, _LOG),
    _metric(_M.CSS_WARNINGS, "CSS warnings", "CSS warnings", _N, _O, _S.COUNT, _LOG),
    _metric(_M.TITLE_CHARS, "Title length", "Title length", _N, _O, _S.COUNT, _LOG),
    _metric(_M.META_DESCRIPTION_CHARS, "Meta description length", "Meta description", _N, _O, _S.COUNT, _LOG),
    _metric(_M.PAGE_SIZE_KB, "Page size", "Page size", _N, _F, _S.KILOBYTES, _LOG),
    _metric(_M.ENCODING_DECLARED, "Encoding", "Encoding", _B, _O, _S.FLAG, _NEVER),
    _metric(_M.ROBOTS_TXT, "Robots.txt", "Robots.txt", _B, _F, _S.FLAG, _NEVER),
    _metric(_M.SITEMAP, "Sitemap", "Sitemap", _B, _F, _S.FLAG, _NEVER),
    _metric(_M.RESPONSIVE, "Responsive", "Responsive", _B, _O, _S.FLAG, _NEVER),
    _metric(_M.SOCIAL_MEDIA, "Social media", "Social media", _N, _O, _S.COUNT, _LOG),
    _metric(_M.INDEXED_PAGES, "Number of indexed pages", "Indexed pages", _N, _P, _S.COUNT, _LOG),
    _metric(_M.LANGUAGE_ENGLISH, "Language", "English", _B, _O, _S.FLAG, _NEVER),
    _metric(_M.DOCTYPE, "Doctype", "Doctype", _B, _O, _S.FLAG, _NEVER),
    _metric(_M.PAGE_404, "Custom 404 page", "404 page", _B, _F, _S.FLAG, _NEVER),
    _metric(_M.GZIP, "Gzip", "Gzip", _B, _F, _S.FLAG, _NEVER),
    _metric(_M.REFERRING_DOMAINS, "Referring domains", "Referring domains", _N, _P, _S.COUNT, _LOG),
    _metric(_M.REFERRING_IPS, "Referring IPs", "Referring IPs", _N, _P, _S.COUNT, _LOG),
    _metric(_M.SECURITY, "Security (HTTPS)", "HTTPS", _B, _F, _S.FLAG, _NEVER),
    _metric(_M.PERFORMANCE, "Performance", "Performance", _N, _P, _S.SCORE_0_100, _NEVER),
    _metric(_M.ACCESSIBILITY, "Accessibility", "Accessibility", _N, _P, _S.SCORE_0_100, _NEVER),
    _metric(_M.PAGE_RANK, "PageRank", "PR", _N, _P, _S.SCORE_0_10, _LOG),
    _metric(_M.DOMAIN_AUTHORITY, "Domain authority", "DA", _N, _P, _S.SCORE_0_100, _NEVER),
    _metric(_M.PAGE_AUTHORITY, "Page authority", "PA", _N, _P, _S.SCORE_0_100, _NEVER),
)


@lru_cache(maxsize=1)
def builtin_registry() -> MetricRegistry:
    """The registry of all 38 metrics in canonical order."""
    return MetricRegistry(_BUILTIN)
