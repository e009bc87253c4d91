"""Models for the impact statistics and association-rule mining."""
import bisect
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, computed_field, field_validator, model_validator

from ..core.errors import OutOfRangeError
from .metric_models import MetricId

# (attribute, bin index); bin index -1 marks a missing value
Item = Tuple[str, int]
MISSING_BIN = -1


class Classification(str, Enum):
    NORMAL = "normal"
    LOG_NORMALIZABLE = "log-normalizable"
    EXCLUDED = "excluded"


class TransformOutcome(BaseModel):
    """A metric's classification plus the series its impact is computed on."""
    model_config = ConfigDict(frozen=True)

    metric: MetricId
    classification: Classification
    shift: float = 0.0
    values: Tuple[Optional[float], ...] = ()
    reason: Optional[str] = None
    raw_skew: Optional[float] = None
    raw_kurtosis: Optional[float] = None
    log_skew: Optional[float] = None
    log_kurtosis: Optional[float] = None

    @property
    def log_applied(self) -> bool:
        return self.classification == Classification.LOG_NORMALIZABLE


class ImpactRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    metric: MetricId
    classification: Classification
    log_applied: bool = False
    shift: float = 0.0
    impact: Optional[float] = None
    n_pairs: int = 0
    reason: Optional[str] = None

    @property
    def scored(self) -> bool:
        return self.impact is not None


class ImpactTable(BaseModel):
    """Scored rows by descending impact, then excluded rows in registry order."""
    model_config = ConfigDict(frozen=True)

    rows: Tuple[ImpactRow, ...] = ()

    def scored(self) -> List[ImpactRow]:
        return [r for r in self.rows if r.scored]

    def excluded(self) -> List[ImpactRow]:
        return [r for r in self.rows if not r.scored]

    def row(self, metric) -> ImpactRow:
        metric_id = MetricId(metric)
        for r in self.rows:
            if r.metric == metric_id:
                return r
        raise KeyError(f"No impact row for {metric_id.value}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "metric": r.metric.value,
                    "classification": r.classification.value,
                    "log_applied": r.log_applied,
                    "shift": r.shift,
                    "impact": r.impact,
                    "n_pairs": r.n_pairs,
                    "reason": r.reason,
                }
                for r in self.rows
            ],
            columns=["metric", "classification", "log_applied", "shift", "impact", "n_pairs", "reason"],
        )


def format_threshold(value: float) -> str:
    """Bin edge as shown in rules: '4,511', '18.4', '0.33'."""
    if abs(value - round(value)) < 1e-9:
        return f"{int(round(value)):,}"
    text = f"{value:,.2f}".rstrip("0").rstrip(".")
    return text


class Condition(BaseModel):
    """One antecedent or consequent condition on a binned attribute."""
    model_config = ConfigDict(frozen=True)

    attribute: str
    label: str
    op: Literal["le", "gt", "between", "missing"]
    low: Optional[float] = None
    high: Optional[float] = None
    bin_index: int

    @model_validator(mode="after")
    def _bounds_match_op(self) -> "Condition":
        if self.op == "between":
            if self.low is None or self.high is None or not self.low < self.high:
                raise ValueError("between condition needs low < high")
        elif self.op == "le" and self.high is None:
            raise ValueError("'le' condition needs an upper threshold")
        elif self.op == "gt" and self.low is None:
            raise ValueError("'gt' condition needs a lower threshold")
        return self

    @property
    def item(self) -> Item:
        return (self.attribute, self.bin_index)

    def render(self) -> str:
        if self.op == "le":
            return f"{self.label} ≤ {format_threshold(self.high)}"
        if self.op == "gt":
            return f"{self.label} > {format_threshold(self.low)}"
        if self.op == "between":
            return f"{format_threshold(self.low)} ≤ {self.label} < {format_threshold(self.high)}"
        return f"{self.label} missing"

    def __str__(self) -> str:
        return self.render()


class BinningScheme(BaseModel):
    """Per-attribute bin edges; each edge list is strictly increasing."""
    model_config = ConfigDict(frozen=True)

    method: str = "equal-width"
    edges: Dict[str, Tuple[float, ...]]

    @field_validator("edges", mode="after")
    @classmethod
    def _strictly_increasing(cls, edges: Dict[str, Tuple[float, ...]]) -> Dict[str, Tuple[float, ...]]:
        for attribute, values in edges.items():
            if len(values) < 2:
                raise ValueError(f"{attribute}: at least two edges required")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{attribute}: edges must be strictly increasing")
        return edges

    def covers(self, attribute: str) -> bool:
        return attribute in self.edges

    def bin_count(self, attribute: str) -> int:
        return len(self.edges[attribute]) - 1

    def bin_index(self, attribute: str, value: float) -> int:
        """Bin of a value: [e_i, e_i+1) for all but the last bin, which is closed.

        Raises:
            OutOfRangeError: If the value lies outside the first and last edge.
        """
        edges = self.edges[attribute]
        if value < edges[0] or value > edges[-1]:
            raise OutOfRangeError(
                f"{attribute}: value {value:g} outside [{edges[0]:g}, {edges[-1]:g}]")
        return min(bisect.bisect_right(edges, value) - 1, len(edges) - 2)

    def condition(self, attribute: str, index: int, label: str) -> Condition:
        if index == MISSING_BIN:
            return Condition(attribute=attribute, label=label, op="missing", bin_index=index)
        edges = self.edges[attribute]
        last = len(edges) - 2
        if index == 0:
            return Condition(attribute=attribute, label=label, op="le", high=edges[1], bin_index=0)
        if index == last:
            return Condition(attribute=attribute, label=label, op="gt", low=edges[last], bin_index=last)
        return Condition(attribute=attribute, label=label, op="between",
                         low=edges[index], high=edges[index + 1], bin_index=index)


class TransactionTable(BaseModel):
    """One transaction (set of items) per record, in record order."""
    model_config = ConfigDict(frozen=True)

    attributes: Tuple[str, ...]
    domains: Tuple[str, ...]
    transactions: Tuple[Tuple[Item, ...], ...]

    def __len__(self) -> int:
        return len(self.transactions)


class FrequentItemset(BaseModel):
    model_config = ConfigDict(frozen=True)

    items: Tuple[Item, ...]
    count: int
    support_pct: float


class Rule(BaseModel):
    """A rule 'antecedent → rank bin' with its counts."""
    model_config = ConfigDict(frozen=True)

    antecedent: Tuple[Condition, ...]
    consequent: Condition
    match_count: int
    antecedent_count: int
    n: int

    @model_validator(mode="after")
    def _counts_consistent(self) -> "Rule":
        if not self.antecedent:
            raise ValueError("rule antecedent must not be empty")
        if not 0 < self.match_count <= self.antecedent_count <= self.n:
            raise ValueError("counts must satisfy 0 < match <= antecedent <= n")
        return self

    @computed_field
    @property
    def confidence_pct(self) -> float:
        return 100.0 * self.match_count / self.antecedent_count

    @computed_field
    @property
    def support_pct(self) -> float:
        return 100.0 * self.match_count / self.n

    @property
    def antecedent_items(self) -> Tuple[Item, ...]:
        return tuple(c.item for c in self.antecedent)

    @property
    def consequent_item(self) -> Item:
        return self.consequent.item

    def render(self) -> str:
        return f"{' AND '.join(c.render() for c in self.antecedent)} → {self.consequent.render()}"


class MiningResult(BaseModel):
    """Output of the full mining pipeline."""
    model_config = ConfigDict(frozen=True)

    features: Tuple[MetricId, ...]
    scheme: BinningScheme
    n: int
    frequent_itemset_count: int
    rules: Tuple[Rule, ...]
    by_confidence: Tuple[Rule, ...]
    by_support: Tuple[Rule, ...]
