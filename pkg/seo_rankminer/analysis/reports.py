"""Markdown and CSV renderings of impact tables and mined rules."""
import io
from datetime import datetime, timezone
from typing import List, Optional, Sequence

import pandas as pd

from ..core import constants
from ..models.analysis_models import ImpactTable, MiningResult, Rule
from ..models.metric_models import MetricRegistry, builtin_registry


def _header(title: str, timestamp: Optional[datetime]) -> List[str]:
    lines = [f"# {title}", ""]
    if timestamp is not None:
        lines[1:1] = ["", f"Generated: {timestamp.astimezone(timezone.utc).strftime(constants.REPORT_TIMESTAMP_FORMAT)}"]
    return lines


def _pct(value: float) -> str:
    return f"{value:.2f}"


def _frame_csv(frame: pd.DataFrame) -> bytes:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue().encode("utf-8")


def impact_csv(table: ImpactTable) -> bytes:
    frame = table.to_frame()
    frame["impact"] = [None if v is None or pd.isna(v) else f"{v:.6f}" for v in frame["impact"]]
    frame["shift"] = [f"{v:g}" for v in frame["shift"]]
    return _frame_csv(frame)


def impact_markdown(table: ImpactTable, registry: Optional[MetricRegistry] = None,
                    timestamp: Optional[datetime] = None) -> str:
    """Scored metrics by impact, followed by the combined excluded group."""
    registry = registry or builtin_registry()
    lines = _header("Impact of SEO parameters on Webometric rank", timestamp)
    lines += [
        "| # | Parameter | Transform | Impact (R²) | Pairs |",
        "|---|-----------|-----------|-------------|-------|",
    ]
    for position, row in enumerate(table.scored(), start=1):
        transform = f"log10(x + {row.shift:g})" if row.log_applied and row.shift else (
            "log10(x)" if row.log_applied else "none")
        lines.append(f"| {position} | {registry.get(row.metric).label} | {transform} "
                     f"| {row.impact:.3f} | {row.n_pairs} |")

    excluded = table.excluded()
    lines += ["", f"Excluded ({len(excluded)}): "
              + (", ".join(f"{registry.get(r.metric).label} ({r.reason})" for r in excluded) or "none")]
    weights = constants.WEBOMETRIC_WEIGHTS
    lines += [
        "",
        "Scores are squared Pearson correlations between each parameter (log-transformed where "
        "that makes its distribution normal) and Webometric rank. Webometric ranking weighs "
        f"visibility at {weights['visibility']}% and size at {weights['size']}%, so link and "
        "indexing parameters are expected near the top.",
        "",
    ]
    return "\n".join(lines)


def rules_csv(rules: Sequence[Rule]) -> bytes:
    frame = pd.DataFrame(
        [
            {
                "antecedent": " AND ".join(c.render() for c in rule.antecedent),
                "consequent": rule.consequent.render(),
                "confidence_pct": _pct(rule.confidence_pct),
                "support_pct": _pct(rule.support_pct),
                "match_count": rule.match_count,
                "antecedent_count": rule.antecedent_count,
                "n": rule.n,
            }
            for rule in rules
        ],
        columns=["antecedent", "consequent", "confidence_pct", "support_pct",
                 "match_count", "antecedent_count", "n"],
    )
    return _frame_csv(frame)


def _rules_table(rules: Sequence[Rule]) -> List[str]:
    if not rules:
        return ["_No rules met the thresholds._"]
    lines = [
        "| Status | Forecast | Confidence (%) | Rule Support (%) |",
        "|--------|----------|----------------|------------------|",
    ]
    for rule in rules:
        status = "<br>".join(c.render() for c in rule.antecedent)
        lines.append(f"| {status} | {rule.consequent.render()} "
                     f"| {_pct(rule.confidence_pct)} | {_pct(rule.support_pct)} |")
    return lines


def rules_markdown(result: MiningResult, registry: Optional[MetricRegistry] = None,
                   timestamp: Optional[datetime] = None) -> str:
    """Two tables, top rules by confidence and by support."""
    registry = registry or builtin_registry()
    lines = _header("Association rules for Webometric rank", timestamp)
    lines.append("Features: " + (", ".join(registry.get(m).label for m in result.features) or "none"))
    lines.append(f"Records: {result.n}; frequent itemsets: {result.frequent_itemset_count}; "
                 f"rules: {len(result.rules)}")
    if not result.frequent_itemset_count:
        lines += ["", "Notice: no frequent itemsets at this support threshold."]
    lines += ["", f"## Top {len(result.by_confidence)} rules by confidence", ""]
    lines += _rules_table(result.by_confidence)
    lines += ["", f"## Top {len(result.by_support)} rules by support", ""]
    lines += _rules_table(result.by_support)
    lines.append("")
    return "\n".join(lines)
