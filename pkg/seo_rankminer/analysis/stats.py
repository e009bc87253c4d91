"""Distribution screening, shift-log transform and rank-impact scores."""
import csv
import io
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as sstats

from ..core import constants
from ..core.errors import (
    AnalysisError,
    InsufficientDataError,
    LogDomainError,
    UndefinedImpactError,
)
from ..models.analysis_models import Classification, ImpactRow, ImpactTable, TransformOutcome
from ..models.config_models import AnalysisSettings
from ..models.dataset_models import Dataset
from ..models.metric_models import MetricDescriptor, MetricKey, TransformPolicy

logger = logging.getLogger(__name__)

SCATTER_HEADER = ["transformed_value", "rank"]


def _present(values: Sequence[Optional[float]]) -> np.ndarray:
    return np.array([v for v in values if v is not None and not math.isnan(v)], dtype=float)


def shift_log(values: Sequence[Optional[float]], shift: float) -> List[Optional[float]]:
    """Base-10 log of ``value + shift``; missing entries stay missing.

    Raises:
        LogDomainError: If any present ``value + shift`` is not positive.
    """
    out: List[Optional[float]] = []
    for v in values:
        if v is None:
            out.append(None)
            continue
        shifted = v + shift
        if not shifted > 0:
            raise LogDomainError(f"log undefined for {v:g} + {shift:g}")
        out.append(float(np.log10(shifted)))
    return out


def _moments(a: np.ndarray) -> Tuple[float, float]:
    """Biased sample skewness and excess kurtosis."""
    return float(sstats.skew(a, bias=True)), float(sstats.kurtosis(a, fisher=True, bias=True))


def _passes(skew: float, kurt: float, settings: AnalysisSettings) -> bool:
    return (
        math.isfinite(skew) and math.isfinite(kurt)
        and abs(skew) <= settings.max_abs_skew
        and abs(kurt) <= settings.max_abs_kurtosis
    )


def transform_metric(values: Sequence[Optional[float]], descriptor: MetricDescriptor,
                     settings: Optional[AnalysisSettings] = None) -> TransformOutcome:
    """Classify a metric's distribution and return the series to score.

    The raw values are screened first; log-candidate metrics that fail are
    shifted (only when a zero is present), logged and screened again.

    Raises:
        InsufficientDataError: With fewer than three present values.
    """
    settings = settings or AnalysisSettings()
    present = _present(values)
    if len(present) < constants.MIN_ANALYSIS_VALUES:
        raise InsufficientDataError(
            f"{descriptor.id.value}: {len(present)} values, need {constants.MIN_ANALYSIS_VALUES}")

    def excluded(reason: str, **moments) -> TransformOutcome:
        return TransformOutcome(metric=descriptor.id, classification=Classification.EXCLUDED,
                                values=tuple(values), reason=reason, **moments)

    if descriptor.is_boolean:
        return excluded("boolean")
    if len(np.unique(present)) <= 2:
        return excluded("two or fewer distinct values")

    raw_skew, raw_kurt = _moments(present)
    if _passes(raw_skew, raw_kurt, settings):
        return TransformOutcome(metric=descriptor.id, classification=Classification.NORMAL,
                                values=tuple(values), raw_skew=raw_skew, raw_kurtosis=raw_kurt)

    if descriptor.transform_policy == TransformPolicy.NEVER_LOG:
        return excluded("not normal", raw_skew=raw_skew, raw_kurtosis=raw_kurt)

    shift = settings.log_shift if bool(np.any(present == 0)) else 0.0
    if np.min(present) + shift <= 0:
        return excluded("log undefined", raw_skew=raw_skew, raw_kurtosis=raw_kurt)

    logged = shift_log(values, shift)
    log_skew, log_kurt = _moments(_present(logged))
    if _passes(log_skew, log_kurt, settings):
        return TransformOutcome(metric=descriptor.id, classification=Classification.LOG_NORMALIZABLE,
                                shift=shift, values=tuple(logged),
                                raw_skew=raw_skew, raw_kurtosis=raw_kurt,
                                log_skew=log_skew, log_kurtosis=log_kurt)
    return excluded("not normal after log", raw_skew=raw_skew, raw_kurtosis=raw_kurt,
                    log_skew=log_skew, log_kurtosis=log_kurt)


def classify_distribution(values: Sequence[Optional[float]], descriptor: MetricDescriptor,
                          settings: Optional[AnalysisSettings] = None) -> Classification:
    """Classification only; see transform_metric."""
    return transform_metric(values, descriptor, settings).classification


def _pairs(x: Sequence[Optional[float]], y: Sequence[Optional[float]]) -> Tuple[np.ndarray, np.ndarray]:
    if len(x) != len(y):
        raise ValueError(f"series lengths differ: {len(x)} vs {len(y)}")
    kept = [
        (float(a), float(b)) for a, b in zip(x, y)
        if a is not None and b is not None and not math.isnan(a) and not math.isnan(b)
    ]
    if not kept:
        return np.empty(0), np.empty(0)
    xs, ys = zip(*kept)
    return np.array(xs), np.array(ys)


def impact_score(x: Sequence[Optional[float]], y: Sequence[Optional[float]]) -> float:
    """Squared Pearson correlation over pairs where both values are present.

    Raises:
        InsufficientDataError: With fewer than three complete pairs.
        UndefinedImpactError: If either side has zero variance.
    """
    xs, ys = _pairs(x, y)
    if len(xs) < constants.MIN_ANALYSIS_VALUES:
        raise InsufficientDataError(f"{len(xs)} complete pairs, need {constants.MIN_ANALYSIS_VALUES}")
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise UndefinedImpactError("correlation undefined for a constant series")
    r, _ = sstats.pearsonr(xs, ys)
    return min(1.0, float(r) ** 2)


def impact_table(dataset: Dataset, settings: Optional[AnalysisSettings] = None) -> ImpactTable:
    """Classify and score every registry metric against Webometric rank."""
    settings = settings or AnalysisSettings()
    ranks = [float(r) for r in dataset.ranks()]
    scored: List[Tuple[int, ImpactRow]] = []
    excluded: List[ImpactRow] = []

    for position, descriptor in enumerate(dataset.registry):
        values = dataset.series(descriptor.id)
        try:
            outcome = transform_metric(values, descriptor, settings)
        except InsufficientDataError as e:
            excluded.append(ImpactRow(metric=descriptor.id, classification=Classification.EXCLUDED,
                                      reason="too few values"))
            logger.debug(str(e))
            continue

        if outcome.classification == Classification.EXCLUDED:
            excluded.append(ImpactRow(metric=descriptor.id, classification=outcome.classification,
                                      reason=outcome.reason))
            continue

        try:
            impact = impact_score(outcome.values, ranks)
        except UndefinedImpactError:
            excluded.append(ImpactRow(metric=descriptor.id, classification=outcome.classification,
                                      log_applied=outcome.log_applied, shift=outcome.shift,
                                      reason="zero variance"))
            continue
        except InsufficientDataError:
            excluded.append(ImpactRow(metric=descriptor.id, classification=outcome.classification,
                                      log_applied=outcome.log_applied, shift=outcome.shift,
                                      reason="too few values"))
            continue

        n_pairs = len(_pairs(outcome.values, ranks)[0])
        scored.append((position, ImpactRow(
            metric=descriptor.id, classification=outcome.classification,
            log_applied=outcome.log_applied, shift=outcome.shift,
            impact=impact, n_pairs=n_pairs)))

    scored.sort(key=lambda item: (-item[1].impact, item[0]))
    logger.info(f"Impact table: {len(scored)} scored, {len(excluded)} excluded")
    return ImpactTable(rows=tuple(row for _, row in scored) + tuple(excluded))


def scatter_points(dataset: Dataset, metric: MetricKey,
                   settings: Optional[AnalysisSettings] = None) -> List[Tuple[float, float]]:
    """The (transformed value, rank) pairs a metric's impact score is computed from.

    Raises:
        AnalysisError: If the metric is excluded from scoring.
    """
    settings = settings or AnalysisSettings()
    descriptor = dataset.registry.get(metric)
    outcome = transform_metric(dataset.series(descriptor.id), descriptor, settings)
    if outcome.classification == Classification.EXCLUDED:
        raise AnalysisError(f"{descriptor.id.value} is excluded ({outcome.reason}); no scatter")
    xs, ys = _pairs(outcome.values, [float(r) for r in dataset.ranks()])
    return list(zip(xs.tolist(), ys.tolist()))


def scatter_export(dataset: Dataset, metric: MetricKey,
                   settings: Optional[AnalysisSettings] = None) -> bytes:
    """Scatter points as CSV with header ``transformed_value,rank``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCATTER_HEADER)
    for value, rank in scatter_points(dataset, metric, settings):
        writer.writerow([repr(value), str(int(rank))])
    return buffer.getvalue().encode("utf-8")
