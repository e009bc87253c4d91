"""Site records, datasets and validation violations."""
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .metric_models import MetricId, MetricKey, MetricRegistry, builtin_registry


class SiteRecord(BaseModel):
    """One site: its domain, Webometric rank and one slot per metric.

    ``values`` always holds all 38 metric ids; absent slots are None.
    """
    model_config = ConfigDict(frozen=True)

    domain: str
    webometric_rank: int
    values: Dict[MetricId, Optional[float]] = Field(default_factory=dict, validate_default=True)

    @field_validator("values", mode="after")
    @classmethod
    def _fill_missing_slots(cls, values: Dict[MetricId, Optional[float]]) -> Dict[MetricId, Optional[float]]:
        return {metric_id: values.get(metric_id) for metric_id in MetricId}

    def value(self, metric: MetricKey) -> Optional[float]:
        return self.values[MetricId(metric)]


class Violation(BaseModel):
    """A single validation failure, reported as data."""
    model_config = ConfigDict(frozen=True)

    rule: str
    message: str
    domain: Optional[str] = None
    metric: Optional[str] = None

    def __str__(self) -> str:
        return f"[{self.rule}] {self.message}"


class SiteEntry(BaseModel):
    """One line of a sites file."""
    model_config = ConfigDict(frozen=True)

    domain: str
    webometric_rank: int
    url: Optional[str] = None


class Dataset(BaseModel):
    """An ordered collection of site records over a metric registry."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    records: Tuple[SiteRecord, ...] = ()
    registry: MetricRegistry = Field(default_factory=builtin_registry)

    def __len__(self) -> int:
        return len(self.records)

    def domains(self) -> List[str]:
        return [r.domain for r in self.records]

    def ranks(self) -> List[int]:
        return [r.webometric_rank for r in self.records]

    def series(self, metric: MetricKey) -> List[Optional[float]]:
        """Values of one metric aligned to records, missing preserved."""
        metric_id = MetricId(metric)
        return [r.values[metric_id] for r in self.records]

    def to_frame(self) -> pd.DataFrame:
        """Records as a DataFrame: domain, webometric_rank, then registry columns (NaN = missing)."""
        columns = [d.id.value for d in self.registry]
        rows = []
        for record in self.records:
            row = {"domain": record.domain, "webometric_rank": record.webometric_rank}
            for metric_id in self.registry.ids():
                value = record.values[metric_id]
                row[metric_id.value] = np.nan if value is None else float(value)
            rows.append(row)
        return pd.DataFrame(rows, columns=["domain", "webometric_rank"] + columns)
