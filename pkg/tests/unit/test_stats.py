"""Tests for the shift-log transform, distribution screen and impact scores."""
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import make_dataset
from seo_rankminer.analysis.stats import (
    classify_distribution,
    impact_score,
    impact_table,
    scatter_export,
    scatter_points,
    shift_log,
    transform_metric,
)
from seo_rankminer.core.errors import (
    AnalysisError,
    InsufficientDataError,
    LogDomainError,
    UndefinedImpactError,
)
from seo_rankminer.models.analysis_models import Classification
from seo_rankminer.models.config_models import AnalysisSettings
from seo_rankminer.models.metric_models import MetricId, builtin_registry


def textbook_r_squared(x, y):
    """Squared Pearson correlation in exact rational arithmetic."""
    n = len(x)
    mx, my = Fraction(sum(x), n), Fraction(sum(y), n)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return float(sxy * sxy / (sxx * syy))


class TestShiftLog:

    def test_exact_values(self):
        assert shift_log([0, 9, 99], 1) == [0.0, 1.0, 2.0]

    def test_missing_preserved(self):
        assert shift_log([None, 9.0], 1.0) == [None, 1.0]

    def test_non_positive_shifted_value(self):
        with pytest.raises(LogDomainError):
            shift_log([0.0, 10.0], 0.0)
        with pytest.raises(LogDomainError):
            shift_log([-2.0], 1.0)

    @given(st.lists(st.floats(min_value=0, max_value=1e9, allow_nan=False), min_size=1, max_size=40))
    def test_monotone(self, values):
        ordered = sorted(values)
        logged = shift_log(ordered, 1.0)
        assert all(a <= b for a, b in zip(logged, logged[1:]))


class TestImpactScore:

    def test_exact_linear_is_one(self):
        x = [1, 2, 3, 4, 5, 6, 7]
        assert impact_score(x, [3 * v + 2 for v in x]) == pytest.approx(1.0, abs=1e-12)

    def test_uncorrelated_is_zero(self):
        assert impact_score([1, 2, 3, 4], [1, 2, 2, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_listwise_deletion(self):
        score = impact_score([1, None, 2, 3, 4], [2, 100, 4, 6, 8])
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_too_few_pairs(self):
        with pytest.raises(InsufficientDataError):
            impact_score([1, 2, None], [1, 2, 3])

    def test_zero_variance(self):
        with pytest.raises(UndefinedImpactError):
            impact_score([5, 5, 5, 5], [1, 2, 3, 4])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000)), min_size=3, max_size=30))
    def test_matches_textbook_formula(self, pairs):
        x, y = [p[0] for p in pairs], [p[1] for p in pairs]
        assume(len(set(x)) > 1 and len(set(y)) > 1)
        assert impact_score(x, y) == pytest.approx(textbook_r_squared(x, y), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.tuples(st.integers(-100, 100), st.integers(-100, 100)), min_size=3, max_size=20),
        st.integers(-5, 5).filter(lambda a: a != 0),
        st.integers(-50, 50),
    )
    def test_affine_invariance(self, pairs, scale, offset):
        x, y = [p[0] for p in pairs], [p[1] for p in pairs]
        assume(len(set(x)) > 1 and len(set(y)) > 1)
        transformed = [scale * v + offset for v in x]
        assert impact_score(transformed, y) == pytest.approx(impact_score(x, y), abs=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6)), min_size=3, max_size=30))
    def test_bounded(self, pairs):
        x, y = [p[0] for p in pairs], [p[1] for p in pairs]
        try:
            score = impact_score(x, y)
        except UndefinedImpactError:
            return
        assert 0.0 <= score <= 1.0


class TestClassification:

    registry = builtin_registry()

    def test_boolean_always_excluded(self):
        outcome = transform_metric([1, 1, 0, 1], self.registry.get("gzip"))
        assert outcome.classification == Classification.EXCLUDED
        assert outcome.reason == "boolean"

    def test_two_distinct_values_excluded(self):
        assert classify_distribution([2, 2, 3, 3, 2], self.registry.get("h1_count")) == Classification.EXCLUDED

    def test_symmetric_values_are_normal(self):
        values = [10, 12, 14, 15, 16, 18, 20]
        outcome = transform_metric(values, self.registry.get("title_chars"))
        assert outcome.classification == Classification.NORMAL
        assert not outcome.log_applied
        assert outcome.values == tuple(values)

    def test_skewed_counts_are_log_normalizable(self):
        values = [10, 100, 1000, 10000, 100000, 1000000, 10000000]
        outcome = transform_metric(values, self.registry.get("backlinks"))
        assert outcome.classification == Classification.LOG_NORMALIZABLE
        assert outcome.shift == 0.0
        assert outcome.values == pytest.approx((1, 2, 3, 4, 5, 6, 7))

    def test_shift_applied_only_with_zero_present(self):
        values = [0, 9, 99, 999, 9999, 99999, 999999]
        outcome = transform_metric(values, self.registry.get("backlinks"))
        assert outcome.classification == Classification.LOG_NORMALIZABLE
        assert outcome.shift == 1.0
        assert outcome.values == pytest.approx((0, 1, 2, 3, 4, 5, 6))

    def test_never_log_skewed_metric_excluded(self):
        values = [1, 1, 1, 1, 2, 1, 1, 1, 95]
        outcome = transform_metric(values, self.registry.get("domain_authority"))
        assert outcome.classification == Classification.EXCLUDED
        assert outcome.reason == "not normal"

    def test_custom_shift_from_settings(self):
        values = [0, 1, 10, 100, 1000, 10000, 100000]
        settings_ = AnalysisSettings(log_shift=0.5)
        outcome = transform_metric(values, self.registry.get("backlinks"), settings_)
        assert outcome.shift == 0.5

    def test_insufficient_values(self):
        with pytest.raises(InsufficientDataError):
            transform_metric([1, None], self.registry.get("backlinks"))


class TestImpactTable:

    def test_scored_then_excluded(self, small_dataset):
        table = impact_table(small_dataset)
        scored = table.scored()
        assert scored[0].metric == MetricId.BACKLINKS
        assert scored[0].log_applied
        assert scored[0].impact == pytest.approx(1.0)
        assert [r.impact for r in scored] == sorted((r.impact for r in scored), reverse=True)
        assert len(table.rows) == 38
        assert table.row("gzip").reason == "boolean"
        assert table.row("alexa_rank").reason == "too few values"

    def test_every_row_has_impact_or_reason(self, small_dataset):
        for row in impact_table(small_dataset).rows:
            assert (row.impact is None) == (row.reason is not None)
            if row.impact is not None:
                assert 0.0 <= row.impact <= 1.0

    def test_missing_values_reduce_pairs(self, small_dataset):
        row = impact_table(small_dataset).row("title_chars")
        assert row.n_pairs == 5

    def test_frame(self, small_dataset):
        frame = impact_table(small_dataset).to_frame()
        assert list(frame.columns) == ["metric", "classification", "log_applied", "shift", "impact",
                                       "n_pairs", "reason"]
        assert len(frame) == 38

    def test_ties_broken_by_registry_order(self):
        dataset = make_dataset([1, 2, 3, 4, 5], total_links=[5, 4, 3, 2, 1], internal_links=[5, 4, 3, 2, 1])
        scored = impact_table(dataset).scored()
        assert [r.metric for r in scored] == [MetricId.TOTAL_LINKS, MetricId.INTERNAL_LINKS]


class TestScatter:

    def test_points_use_transformed_values(self, small_dataset):
        points = scatter_points(small_dataset, "backlinks")
        assert [x for x, _ in points] == pytest.approx([6.0, 5.0, 4.0, 3.0, 2.0, 1.0])
        assert [y for _, y in points] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

    def test_export_csv(self, small_dataset):
        lines = scatter_export(small_dataset, "title_chars").decode("utf-8").splitlines()
        assert lines[0] == "transformed_value,rank"
        assert len(lines) == 6
        assert lines[1] == "30.0,1"

    def test_excluded_metric_has_no_scatter(self, small_dataset):
        with pytest.raises(AnalysisError):
            scatter_points(small_dataset, "gzip")
