"""Tests for dataset CSV serialization and validation."""
import pytest

from conftest import make_dataset
from seo_rankminer.core.dataset_io import (
    load_dataset,
    load_dataset_csv,
    load_replay_dataset,
    save_dataset,
    save_dataset_csv,
    validate_dataset,
)
from seo_rankminer.core.errors import DatasetParseError
from seo_rankminer.models.dataset_models import Dataset, SiteRecord
from seo_rankminer.models.metric_models import MetricId


class TestSaveAndLoad:
    """Dataset CSV format."""

    def test_header_is_fixed_columns_then_registry_order(self, small_dataset):
        header = save_dataset_csv(small_dataset).decode("utf-8").splitlines()[0].split(",")
        assert header[:2] == ["domain", "webometric_rank"]
        assert header[2:] == [m.value for m in MetricId]

    def test_integers_written_without_decimal_point(self):
        dataset = make_dataset([3], backlinks=[1200.0], load_time_ms=[512.5])
        row = save_dataset_csv(dataset).decode("utf-8").splitlines()[1].split(",")
        assert row[0] == "site1.test"
        assert row[1] == "3"
        assert row[2 + list(MetricId).index(MetricId.BACKLINKS)] == "1200"
        assert row[2 + list(MetricId).index(MetricId.LOAD_TIME_MS)] == "512.5"

    def test_missing_written_as_empty_cell(self, small_dataset):
        reloaded = load_dataset_csv(save_dataset_csv(small_dataset))
        assert reloaded.records[1].value("title_chars") is None
        assert reloaded.records[0].value("alexa_rank") is None

    def test_file_round_trip_preserves_records(self, small_dataset, temp_dir):
        path = temp_dir / "dataset.csv"
        save_dataset(small_dataset, str(path))
        assert load_dataset(str(path)).records == small_dataset.records

    def test_subset_of_metric_columns(self):
        dataset = load_dataset_csv("domain,webometric_rank,gzip,backlinks\na.edu,1,1,500\nb.edu,2,,\n")
        assert len(dataset) == 2
        assert dataset.records[0].value("gzip") == 1.0
        assert dataset.records[0].value("backlinks") == 500.0
        assert dataset.records[1].value("gzip") is None
        assert dataset.records[0].value("trust_flow") is None

    def test_utf8_bom_accepted(self):
        dataset = load_dataset_csv("\ufeffdomain,webometric_rank\na.edu,4\n".encode("utf-8"))
        assert dataset.ranks() == [4]

    def test_replay_dataset_bundled(self):
        dataset = load_replay_dataset()
        assert len(dataset) == 75
        assert validate_dataset(dataset) == []


class TestParseErrors:
    """Malformed CSV is reported with row and column."""

    def test_empty_input(self):
        with pytest.raises(DatasetParseError):
            load_dataset_csv(b"")

    def test_bad_header(self):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv("site,rank\na.edu,1\n")
        assert excinfo.value.row == 1

    def test_unknown_metric_column(self):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv("domain,webometric_rank,klout\na.edu,1,3\n")
        assert excinfo.value.column == "klout"

    def test_non_numeric_value(self):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv("domain,webometric_rank,backlinks\na.edu,1,12\nb.edu,2,many\n")
        assert excinfo.value.row == 3
        assert excinfo.value.column == "backlinks"
        assert "row 3" in str(excinfo.value)

    @pytest.mark.parametrize("cell", ["nan", "NaN", "inf", "-inf", "Infinity"])
    def test_non_finite_value(self, cell):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv(f"domain,webometric_rank,backlinks\na.edu,1,{cell}\n")
        assert excinfo.value.row == 2
        assert excinfo.value.column == "backlinks"

    def test_non_integer_rank(self):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv("domain,webometric_rank\na.edu,first\n")
        assert excinfo.value.column == "webometric_rank"

    def test_wrong_field_count(self):
        with pytest.raises(DatasetParseError) as excinfo:
            load_dataset_csv("domain,webometric_rank,gzip\na.edu,1\n")
        assert excinfo.value.row == 2


class TestValidation:
    """Violations are returned as data, one per problem."""

    def test_valid_dataset(self, small_dataset):
        assert validate_dataset(small_dataset) == []

    def test_record_without_values_has_every_slot(self):
        record = SiteRecord(domain="a.edu", webometric_rank=1)
        assert len(record.values) == len(MetricId)
        assert record.value("backlinks") is None
        dataset = Dataset(records=(record,))
        assert validate_dataset(dataset) == []
        assert dataset.series("gzip") == [None]
        assert save_dataset_csv(dataset).decode("utf-8").splitlines()[1] == "a.edu,1" + "," * len(MetricId)

    def test_duplicate_domains_case_insensitive(self):
        dataset = Dataset(records=(
            SiteRecord(domain="MIT.edu", webometric_rank=1),
            SiteRecord(domain="mit.edu", webometric_rank=2),
        ))
        rules = [v.rule for v in validate_dataset(dataset)]
        assert rules == ["duplicate-domain"]

    def test_rank_must_be_positive(self):
        dataset = Dataset(records=(SiteRecord(domain="a.edu", webometric_rank=0),))
        assert [v.rule for v in validate_dataset(dataset)] == ["rank-positive"]

    def test_domain_must_be_hostname(self):
        dataset = Dataset(records=(SiteRecord(domain="not a host", webometric_rank=1),))
        assert [v.rule for v in validate_dataset(dataset)] == ["domain-hostname"]

    def test_host_with_port_allowed(self):
        dataset = Dataset(records=(SiteRecord(domain="127.0.0.1:8080", webometric_rank=1),))
        assert validate_dataset(dataset) == []

    def test_value_violations_name_metric(self):
        dataset = make_dataset([1, 2], gzip=[1.0, 2.0], backlinks=[-5.0, 3.0])
        violations = validate_dataset(dataset)
        assert {(v.rule, v.metric, v.domain) for v in violations} == {
            ("value-flag", "gzip", "site2.test"),
            ("value-non-negative", "backlinks", "site1.test"),
        }
        assert all(str(v).startswith("[") for v in violations)
