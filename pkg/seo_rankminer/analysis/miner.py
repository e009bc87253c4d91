"""Feature selection, discretization, Apriori and rank-targeted rules."""
import logging
import math
from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core import constants
from ..core.errors import AnalysisError, DegenerateBinsError
from ..models.analysis_models import (
    MISSING_BIN,
    BinningScheme,
    FrequentItemset,
    ImpactTable,
    Item,
    MiningResult,
    Rule,
    TransactionTable,
)
from ..models.config_models import AnalysisSettings, MiningSettings
from ..models.dataset_models import Dataset
from ..models.metric_models import MetricId, MetricRegistry, builtin_registry
from .stats import impact_score, impact_table

logger = logging.getLogger(__name__)

RANK = constants.RANK_ATTRIBUTE


def _present(values: Iterable[Optional[float]]) -> np.ndarray:
    return np.array([v for v in values if v is not None and not math.isnan(v)], dtype=float)


def _is_zero_one(values: Sequence[Optional[float]]) -> bool:
    return set(_present(values).tolist()) == {0.0, 1.0}


def feature_importance(dataset: Dataset, settings: Optional[AnalysisSettings] = None,
                       table: Optional[ImpactTable] = None) -> List[Tuple[MetricId, float, bool]]:
    """Candidates for selection as ``(metric, importance, is_zero_one)``, most important first.

    Scored metrics contribute their impact score. Metrics observed only as 0
    and 1 are scored on raw values so they can compete for the top k.
    """
    table = table or impact_table(dataset, settings)
    ranks = [float(r) for r in dataset.ranks()]
    candidates: List[Tuple[float, int, MetricId, bool]] = []

    for row in table.scored():
        candidates.append((row.impact, dataset.registry.position(row.metric), row.metric, False))

    scored_ids = {row.metric for row in table.scored()}
    for position, descriptor in enumerate(dataset.registry):
        if descriptor.id in scored_ids:
            continue
        values = dataset.series(descriptor.id)
        if not _is_zero_one(values):
            continue
        try:
            importance = impact_score(values, ranks)
        except AnalysisError:
            continue
        candidates.append((importance, position, descriptor.id, True))

    candidates.sort(key=lambda c: (-c[0], c[1]))
    return [(metric, importance, binary) for importance, _, metric, binary in candidates]


def select_features(dataset: Dataset, k: int = constants.DEFAULT_FEATURE_K,
                    settings: Optional[AnalysisSettings] = None,
                    table: Optional[ImpactTable] = None) -> List[MetricId]:
    """Top-k metrics by importance with zero-one metrics removed afterwards.

    Raises:
        ValueError: If k < 1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked = feature_importance(dataset, settings, table)
    top = ranked[:k]
    dropped = [m.value for m, _, binary in top if binary]
    if dropped:
        logger.info(f"Excluding zero-one metrics from the top {k}: {', '.join(dropped)}")
    return [m for m, _, binary in top if not binary]


def equal_width_bins(values: Sequence[Optional[float]], k: int = constants.DEFAULT_BINS) -> List[float]:
    """k equal-width bins over the observed range: k+1 edges, first = min, last = max.

    Raises:
        ValueError: If k < 2.
        DegenerateBinsError: With fewer than two distinct present values.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    present = _present(values)
    if len(np.unique(present)) < 2:
        raise DegenerateBinsError("need at least two distinct values to bin")
    low, high = float(present.min()), float(present.max())
    width = (high - low) / k
    return [low + i * width for i in range(k)] + [high]


def quantile_bins(values: Sequence[Optional[float]], k: int = constants.DEFAULT_BINS) -> List[float]:
    """Up to k equal-frequency bins; coinciding quantiles are merged.

    Raises:
        ValueError: If k < 2.
        DegenerateBinsError: With fewer than two distinct present values.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    present = _present(values)
    if len(np.unique(present)) < 2:
        raise DegenerateBinsError("need at least two distinct values to bin")
    edges = np.unique(np.quantile(present, np.linspace(0.0, 1.0, k + 1)))
    return [float(e) for e in edges]


def build_scheme(dataset: Dataset, metrics: Sequence[MetricId], k: int = constants.DEFAULT_BINS,
                 method: str = "equal-width") -> BinningScheme:
    """Bin edges for the given metrics plus the rank attribute.

    Raises:
        DegenerateBinsError: If any attribute has fewer than two distinct values.
    """
    binner = quantile_bins if method == "quantile" else equal_width_bins
    edges: Dict[str, Tuple[float, ...]] = {}
    for metric in metrics:
        edges[MetricId(metric).value] = tuple(binner(dataset.series(metric), k))
    edges[RANK] = tuple(binner([float(r) for r in dataset.ranks()], k))
    return BinningScheme(method=method, edges=edges)


def discretize(dataset: Dataset, metrics: Sequence[MetricId], scheme: BinningScheme,
               include_missing: bool = False) -> TransactionTable:
    """One transaction of (attribute, bin) items per record, always including a rank item.

    Raises:
        ValueError: If the scheme does not cover every metric and the rank.
        OutOfRangeError: If a value falls outside its attribute's edges.
    """
    attributes = [MetricId(m).value for m in metrics]
    uncovered = [a for a in attributes + [RANK] if not scheme.covers(a)]
    if uncovered:
        raise ValueError(f"binning scheme does not cover: {', '.join(uncovered)}")

    transactions = []
    for record in dataset.records:
        items: List[Item] = []
        for attribute in attributes:
            value = record.values[MetricId(attribute)]
            if value is None or math.isnan(value):
                if include_missing:
                    items.append((attribute, MISSING_BIN))
                continue
            items.append((attribute, scheme.bin_index(attribute, value)))
        items.append((RANK, scheme.bin_index(RANK, float(record.webometric_rank))))
        transactions.append(tuple(sorted(items)))

    return TransactionTable(attributes=tuple(attributes), domains=tuple(dataset.domains()),
                            transactions=tuple(transactions))


def _is_frequent(count: int, n: int, min_support_pct: float) -> bool:
    return 100.0 * count >= min_support_pct * n - constants.PERCENT_TOLERANCE


def _candidates(previous: List[Tuple[Item, ...]], frequent: Dict[Tuple[Item, ...], int]) -> List[Tuple[Item, ...]]:
    """Join itemsets sharing all but their last item, then prune by downward closure."""
    size = len(previous[0]) + 1
    out = []
    for i, left in enumerate(previous):
        for right in previous[i + 1:]:
            if left[:-1] != right[:-1]:
                break
            candidate = left + (right[-1],)
            if all(subset in frequent for subset in combinations(candidate, size - 1)):
                out.append(candidate)
    return out


def mine_frequent(transactions: Sequence[Sequence[Item]], min_support_pct: float,
                  max_itemset_size: int = constants.DEFAULT_MAX_ANTECEDENT + 1) -> List[FrequentItemset]:
    """Level-wise Apriori returning every itemset meeting the support threshold.

    Returns:
        Frequent itemsets with exact counts, sorted lexicographically by items.

    Raises:
        ValueError: If min_support_pct is outside (0, 100] or max_itemset_size < 1.
    """
    if not 0 < min_support_pct <= 100:
        raise ValueError(f"min_support_pct must be in (0, 100], got {min_support_pct}")
    if max_itemset_size < 1:
        raise ValueError(f"max_itemset_size must be >= 1, got {max_itemset_size}")
    n = len(transactions)
    if n == 0:
        return []

    baskets = [tuple(sorted(set(t))) for t in transactions]
    singles = Counter(item for basket in baskets for item in basket)
    level = {(item,): count for item, count in singles.items() if _is_frequent(count, n, min_support_pct)}
    frequent: Dict[Tuple[Item, ...], int] = dict(level)

    size = 1
    while level and size < max_itemset_size:
        size += 1
        candidates = set(_candidates(sorted(level), level))
        if not candidates:
            break
        counts: Counter = Counter()
        for basket in baskets:
            if len(basket) < size:
                continue
            for combo in combinations(basket, size):
                if combo in candidates:
                    counts[combo] += 1
        level = {c: counts[c] for c in candidates if _is_frequent(counts[c], n, min_support_pct)}
        frequent.update(level)
        logger.debug(f"Apriori level {size}: {len(candidates)} candidates, {len(level)} frequent")

    return [
        FrequentItemset(items=items, count=count, support_pct=100.0 * count / n)
        for items, count in sorted(frequent.items())
    ]


def _label(attribute: str, registry: MetricRegistry) -> str:
    if attribute == RANK:
        return constants.RANK_LABEL
    return registry.get(attribute).short_label


def derive_rules(itemsets: Sequence[FrequentItemset], n: int, scheme: BinningScheme,
                 min_confidence_pct: float = constants.DEFAULT_MIN_CONFIDENCE_PCT,
                 consequent: str = RANK,
                 registry: Optional[MetricRegistry] = None) -> List[Rule]:
    """Every rule 'antecedent → consequent bin' with confidence at or above the threshold.

    Conditions are rendered from bin indices using the scheme's edges.
    """
    registry = registry or builtin_registry()
    counts = {fs.items: fs.count for fs in itemsets}
    rules: List[Rule] = []

    for fs in itemsets:
        heads = [item for item in fs.items if item[0] == consequent]
        if len(heads) != 1 or len(fs.items) < 2:
            continue
        body = tuple(item for item in fs.items if item[0] != consequent)
        antecedent_count = counts.get(body)
        if antecedent_count is None:
            logger.warning(f"Antecedent {body} missing from itemsets; skipping")
            continue
        if 100.0 * fs.count < min_confidence_pct * antecedent_count - constants.PERCENT_TOLERANCE:
            continue
        head = heads[0]
        rules.append(Rule(
            antecedent=tuple(scheme.condition(a, i, _label(a, registry)) for a, i in body),
            consequent=scheme.condition(head[0], head[1], _label(head[0], registry)),
            match_count=fs.count,
            antecedent_count=antecedent_count,
            n=n,
        ))
    return rules


def top_rules(rules: Sequence[Rule], key: str = "confidence", n: int = constants.DEFAULT_TOP_N) -> List[Rule]:
    """Rules sorted by key descending, then the other key, shorter antecedent, items; first n.

    Raises:
        ValueError: For an unknown key or negative n.
    """
    if key not in ("confidence", "support"):
        raise ValueError(f"key must be 'confidence' or 'support', got {key!r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")

    def sort_key(rule: Rule):
        # exact ratios so equal percentages tie
        confidence = Fraction(rule.match_count, rule.antecedent_count)
        support = Fraction(rule.match_count, rule.n)
        primary, secondary = (confidence, support) if key == "confidence" else (support, confidence)
        return (-primary, -secondary, len(rule.antecedent), rule.antecedent_items, rule.consequent_item)

    return sorted(rules, key=sort_key)[:n]


def reconstruct_counts(confidence_pct: float, support_pct: float, n: int) -> Optional[Tuple[int, int]]:
    """Integer (match_count, antecedent_count) behind rounded percentages.

    Searches every 1 ≤ m ≤ a ≤ n and keeps the pair with the smallest worst-case
    rounding error, provided both percentages are reproduced within 0.01.

    Raises:
        ValueError: If n < 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    tolerance = constants.RECONSTRUCT_TOLERANCE + constants.PERCENT_TOLERANCE
    best: Optional[Tuple[float, int, int]] = None
    for match in range(1, n + 1):
        support_error = abs(100.0 * match / n - support_pct)
        if support_error > tolerance:
            continue
        for antecedent in range(match, n + 1):
            error = max(support_error, abs(100.0 * match / antecedent - confidence_pct))
            if error <= tolerance and (best is None or error < best[0]):
                best = (error, match, antecedent)
    return None if best is None else (best[1], best[2])


def mine_rules(dataset: Dataset, settings: Optional[MiningSettings] = None,
               analysis: Optional[AnalysisSettings] = None) -> MiningResult:
    """Select features, bin, mine and derive rules; returns top-n tables and the full rule set."""
    settings = settings or MiningSettings()
    table = impact_table(dataset, analysis)
    selected = select_features(dataset, settings.feature_k, analysis, table)

    features = []
    for metric in selected:
        if len(np.unique(_present(dataset.series(metric)))) < 2:
            logger.warning(f"Skipping {metric.value}: fewer than two distinct values")
            continue
        features.append(metric)

    scheme = build_scheme(dataset, features, settings.bins, settings.binning)
    transactions = discretize(dataset, features, scheme, settings.include_missing_items)
    itemsets = mine_frequent(transactions.transactions, settings.min_support_pct,
                             settings.max_antecedent + 1)
    rules = derive_rules(itemsets, len(transactions), scheme, settings.min_confidence_pct,
                         registry=dataset.registry)
    logger.info(f"Mined {len(itemsets)} frequent itemsets and {len(rules)} rules over {len(features)} features")

    ordered = top_rules(rules, "confidence", len(rules))
    return MiningResult(
        features=tuple(features),
        scheme=scheme,
        n=len(transactions),
        frequent_itemset_count=len(itemsets),
        rules=tuple(ordered),
        by_confidence=tuple(ordered[:settings.top_n]),
        by_support=tuple(top_rules(rules, "support", settings.top_n)),
    )
