"""Tests for feature selection, binning, Apriori and rule derivation."""
import pytest

from conftest import make_dataset
from seo_rankminer.analysis.miner import (
    build_scheme,
    derive_rules,
    discretize,
    equal_width_bins,
    feature_importance,
    mine_frequent,
    mine_rules,
    quantile_bins,
    reconstruct_counts,
    select_features,
    top_rules,
)
from seo_rankminer.core.errors import DegenerateBinsError, OutOfRangeError
from seo_rankminer.models.analysis_models import MISSING_BIN, BinningScheme, format_threshold
from seo_rankminer.models.config_models import MiningSettings
from seo_rankminer.models.metric_models import MetricId

B, T, R = "backlinks", "trust_flow", "webometric_rank"

TRANSACTIONS = [
    ((B, 0), (T, 1), (R, 0)),
    ((B, 0), (T, 1), (R, 0)),
    ((B, 0), (T, 0), (R, 1)),
    ((B, 1), (T, 0), (R, 1)),
]

SCHEME = BinningScheme(edges={B: (0.0, 50.0, 100.0), T: (0.0, 10.0, 20.0), R: (1.0, 50.0, 100.0)})


class TestBinning:

    def test_equal_width_edges(self):
        edges = equal_width_bins(list(range(1, 89)), 5)
        assert edges == pytest.approx([1, 18.4, 35.8, 53.2, 70.6, 88])
        assert edges[0] == 1 and edges[-1] == 88

    def test_equal_width_ignores_missing(self):
        assert equal_width_bins([None, 0.0, 10.0], 2) == [0.0, 5.0, 10.0]

    def test_degenerate(self):
        with pytest.raises(DegenerateBinsError):
            equal_width_bins([3.0, 3.0, None], 5)

    def test_too_few_bins(self):
        with pytest.raises(ValueError):
            equal_width_bins([1.0, 2.0], 1)

    def test_quantile_merges_coinciding_edges(self):
        edges = quantile_bins([0, 0, 0, 0, 0, 0, 1, 2], 4)
        assert edges[0] == 0 and edges[-1] == 2
        assert edges == sorted(set(edges))

    def test_bin_index_half_open_with_closed_last_bin(self):
        assert SCHEME.bin_index(B, 0) == 0
        assert SCHEME.bin_index(B, 49.9) == 0
        assert SCHEME.bin_index(B, 50) == 1
        assert SCHEME.bin_index(B, 100) == 1

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            SCHEME.bin_index(B, 100.5)
        with pytest.raises(OutOfRangeError):
            SCHEME.bin_index(B, -1)

    def test_scheme_rejects_unsorted_edges(self):
        with pytest.raises(ValueError):
            BinningScheme(edges={B: (0.0, 0.0, 1.0)})

    def test_build_scheme_includes_rank(self):
        dataset = make_dataset([1, 2, 3, 4, 5], backlinks=[0, 25, 50, 75, 100])
        scheme = build_scheme(dataset, [MetricId.BACKLINKS], k=2)
        assert scheme.edges == {B: (0.0, 50.0, 100.0), R: (1.0, 3.0, 5.0)}


class TestConditions:

    @pytest.mark.parametrize("value,text", [
        (4511.0, "4,511"),
        (18.4, "18.4"),
        (4800005.0, "4,800,005"),
        (0.3333333, "0.33"),
        (70.6, "70.6"),
        (0.0, "0"),
    ])
    def test_format_threshold(self, value, text):
        assert format_threshold(value) == text

    def test_render_by_bin_position(self):
        scheme = BinningScheme(edges={T: (1.0, 18.4, 35.8, 53.2, 70.6, 88.0)})
        assert scheme.condition(T, 0, "Trust flow").render() == "Trust flow ≤ 18.4"
        assert scheme.condition(T, 3, "Trust flow").render() == "53.2 ≤ Trust flow < 70.6"
        assert scheme.condition(T, 4, "Trust flow").render() == "Trust flow > 70.6"
        assert scheme.condition(T, MISSING_BIN, "Trust flow").render() == "Trust flow missing"


class TestDiscretize:

    def test_one_item_per_attribute(self):
        dataset = make_dataset([1, 2, 3, 4, 5], backlinks=[0, 25, 50, 75, 100])
        scheme = build_scheme(dataset, [MetricId.BACKLINKS], k=2)
        table = discretize(dataset, [MetricId.BACKLINKS], scheme)
        assert len(table) == 5
        assert table.transactions[0] == ((B, 0), (R, 0))
        assert table.transactions[2] == ((B, 1), (R, 1))
        assert table.transactions[4] == ((B, 1), (R, 1))
        assert table.domains[0] == "site1.test"

    def test_missing_values(self):
        dataset = make_dataset([1, 2, 3], backlinks=[0, None, 100])
        scheme = build_scheme(dataset, [MetricId.BACKLINKS], k=2)
        assert discretize(dataset, [MetricId.BACKLINKS], scheme).transactions[1] == ((R, 1),)
        with_missing = discretize(dataset, [MetricId.BACKLINKS], scheme, include_missing=True)
        assert with_missing.transactions[1] == ((B, MISSING_BIN), (R, 1))

    def test_value_outside_foreign_scheme(self):
        dataset = make_dataset([1, 2, 3], backlinks=[0, 50, 500])
        with pytest.raises(OutOfRangeError):
            discretize(dataset, [MetricId.BACKLINKS], SCHEME)

    def test_uncovered_attribute(self):
        dataset = make_dataset([1, 2, 3], trust_flow=[1, 2, 3])
        with pytest.raises(ValueError):
            discretize(dataset, [MetricId.TRUST_FLOW], BinningScheme(edges={R: (1.0, 2.0, 3.0)}))


class TestApriori:

    def test_frequent_itemsets(self):
        itemsets = {fs.items: fs.count for fs in mine_frequent(TRANSACTIONS, 50.0)}
        assert itemsets == {
            ((B, 0),): 3,
            ((T, 0),): 2,
            ((T, 1),): 2,
            ((R, 0),): 2,
            ((R, 1),): 2,
            ((B, 0), (T, 1)): 2,
            ((B, 0), (R, 0)): 2,
            ((T, 0), (R, 1)): 2,
            ((T, 1), (R, 0)): 2,
            ((B, 0), (T, 1), (R, 0)): 2,
        }

    def test_support_pct(self):
        singles = {fs.items: fs.support_pct for fs in mine_frequent(TRANSACTIONS, 50.0, max_itemset_size=1)}
        assert singles[((B, 0),)] == 75.0
        assert len(singles) == 5

    def test_empty_input(self):
        assert mine_frequent([], 10.0) == []

    @pytest.mark.parametrize("support", [0, -1, 100.5])
    def test_invalid_support(self, support):
        with pytest.raises(ValueError):
            mine_frequent(TRANSACTIONS, support)


class TestRules:

    def rules(self, min_confidence=60.0):
        return derive_rules(mine_frequent(TRANSACTIONS, 50.0), len(TRANSACTIONS), SCHEME, min_confidence)

    def test_rules_target_rank(self):
        found = {(r.antecedent_items, r.consequent_item): (r.match_count, r.antecedent_count)
                 for r in self.rules()}
        assert found == {
            (((B, 0),), (R, 0)): (2, 3),
            (((T, 0),), (R, 1)): (2, 2),
            (((T, 1),), (R, 0)): (2, 2),
            (((B, 0), (T, 1)), (R, 0)): (2, 2),
        }

    def test_confidence_threshold(self):
        assert len(self.rules(70.0)) == 3

    def test_render(self):
        rule = next(r for r in self.rules() if r.antecedent_items == ((B, 0), (T, 1)))
        assert rule.render() == "Backlinks ≤ 50 AND Trust flow > 10 → Webometric rank ≤ 50"
        assert rule.confidence_pct == 100.0
        assert rule.support_pct == 50.0

    def test_top_rules_ordering(self):
        ordered = top_rules(self.rules(), "confidence", 10)
        assert [r.antecedent_items for r in ordered] == [
            ((T, 0),), ((T, 1),), ((B, 0), (T, 1)), ((B, 0),)]
        assert len(top_rules(self.rules(), "support", 2)) == 2
        assert top_rules(self.rules(), "support", 0) == []

    def test_top_rules_bad_key(self):
        with pytest.raises(ValueError):
            top_rules(self.rules(), "lift")


class TestReconstructCounts:

    @pytest.mark.parametrize("confidence,support,expected", [
        (100, 12, (9, 9)),
        (90, 12, (9, 10)),
        (61.54, 10.67, (8, 13)),
        (100, 10.67, (8, 8)),
        (100, 5.33, (4, 4)),
        (100, 8, (6, 6)),
    ])
    def test_rounded_percentages(self, confidence, support, expected):
        assert reconstruct_counts(confidence, support, 75) == expected

    def test_unreachable(self):
        assert reconstruct_counts(100, 12.5, 75) is None

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            reconstruct_counts(100, 10, 0)


class TestFeatureSelection:

    def test_importance_order(self, small_dataset):
        ranked = feature_importance(small_dataset)
        assert [m for m, _, _ in ranked] == [
            MetricId.BACKLINKS, MetricId.TRUST_FLOW, MetricId.GZIP, MetricId.TITLE_CHARS]
        assert ranked[2][1] == pytest.approx(12.25 / 26.25)
        assert [binary for _, _, binary in ranked] == [False, False, True, False]

    def test_zero_one_metrics_dropped_after_top_k(self, small_dataset):
        assert select_features(small_dataset, 3) == [MetricId.BACKLINKS, MetricId.TRUST_FLOW]
        assert select_features(small_dataset, 4) == [
            MetricId.BACKLINKS, MetricId.TRUST_FLOW, MetricId.TITLE_CHARS]

    def test_invalid_k(self, small_dataset):
        with pytest.raises(ValueError):
            select_features(small_dataset, 0)


class TestMineRules:

    def test_pipeline_on_small_dataset(self, small_dataset):
        settings = MiningSettings(feature_k=2, bins=2, min_support_pct=30.0, min_confidence_pct=60.0)
        result = mine_rules(small_dataset, settings)

        assert result.features == (MetricId.BACKLINKS, MetricId.TRUST_FLOW)
        assert result.n == 6
        assert result.frequent_itemset_count == 13
        assert result.scheme.edges[T] == pytest.approx((11.0, 35.5, 60.0))
        assert [r.render() for r in result.by_confidence] == [
            "Trust flow ≤ 35.5 → Webometric rank > 3.5",
            "Trust flow > 35.5 → Webometric rank ≤ 3.5",
            "Backlinks ≤ 500,005 AND Trust flow ≤ 35.5 → Webometric rank > 3.5",
            "Backlinks ≤ 500,005 AND Trust flow > 35.5 → Webometric rank ≤ 3.5",
            "Backlinks ≤ 500,005 → Webometric rank > 3.5",
        ]
        assert result.rules == result.by_confidence
        assert [(r.match_count, r.antecedent_count) for r in result.by_support] == [
            (3, 3), (3, 3), (3, 3), (3, 5), (2, 2)]

    def test_top_n_truncates_tables_only(self, small_dataset):
        settings = MiningSettings(feature_k=2, bins=2, min_support_pct=30.0, top_n=2)
        result = mine_rules(small_dataset, settings)
        assert len(result.by_confidence) == 2
        assert len(result.by_support) == 2
        assert len(result.rules) == 5
