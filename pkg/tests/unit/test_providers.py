"""Tests for the provider registry, fixture, composite and search providers."""
from datetime import datetime, timezone

import pytest
import requests

from seo_rankminer.core.errors import FixtureLoadError, ProviderPreconditionError, ProviderTransportError
from seo_rankminer.models.metric_models import MetricId
from seo_rankminer.providers import (
    CompositeProvider,
    FixtureProvider,
    FixtureSearchClient,
    GoogleCustomSearchClient,
    ProviderCategory,
    ProviderRegistry,
    SearchIndexProvider,
    composite,
    fixture_provider,
    indexed_pages_query,
    normalise_domain,
)


class TestRegistry:

    def test_builtin_providers_registered(self):
        providers = ProviderRegistry.get_all_providers()
        assert {"fixture", "search", "composite"} <= set(providers)
        assert ProviderRegistry.get_provider("fixture") is FixtureProvider

    def test_by_category(self):
        assert set(ProviderRegistry.get_providers_by_category(ProviderCategory.SEARCH)) == {"search"}

    def test_describe_sorted_by_name(self):
        names = [p["name"] for p in ProviderRegistry.describe()]
        assert names == sorted(names)
        search = next(p for p in ProviderRegistry.describe() if p["name"] == "search")
        assert search["category"] == "SEARCH"
        assert "GOOGLE_CSE_API_KEY" in search["credentials_env"]


class TestNormaliseDomain:

    @pytest.mark.parametrize("raw, expected", [
        ("MIT.edu", "mit.edu"),
        ("www.mit.edu", "mit.edu"),
        ("https://www.mit.edu/about", "mit.edu"),
        ("mit.edu:8080", "mit.edu"),
        ("  ox.ac.uk ", "ox.ac.uk"),
    ])
    def test_normalise(self, raw, expected):
        assert normalise_domain(raw) == expected


class TestFixtureProvider:

    def test_value_and_explicit_null(self, provider_fixture_data):
        provider = FixtureProvider(provider_fixture_data)
        assert provider.get("probe.test", "backlinks").value == 120000.0
        indexed = provider.get("probe.test", MetricId.INDEXED_PAGES)
        assert indexed.value is None
        assert not indexed.available

    def test_missing_domain_or_metric_is_unavailable(self, provider_fixture_data):
        provider = FixtureProvider(provider_fixture_data)
        assert not provider.get("unknown.test", "backlinks").available
        assert not provider.get("probe.test", "alexa_rank").available

    def test_domains_normalised(self, provider_fixture_data):
        provider = FixtureProvider(provider_fixture_data)
        assert provider.get("https://www.OTHER.test/", "alexa_rank").value == 5400.0
        assert provider.domains() == ["other.test", "probe.test"]

    def test_onpage_metric_is_precondition_error(self, provider_fixture_data):
        with pytest.raises(ProviderPreconditionError):
            FixtureProvider(provider_fixture_data).get("probe.test", "title_chars")

    @pytest.mark.parametrize("entries, entry", [
        ({"a.edu": {"klout": 3}}, "a.edu.klout"),
        ({"a.edu": {"title_chars": 30}}, "a.edu.title_chars"),
        ({"a.edu": {"backlinks": "many"}}, "a.edu.backlinks"),
        ({"a.edu": {"backlinks": True}}, "a.edu.backlinks"),
        ({"a.edu": {"trust_flow": 140}}, "a.edu.trust_flow"),
        ({"a.edu": [1, 2]}, "a.edu"),
    ])
    def test_malformed_entries_name_the_entry(self, entries, entry):
        with pytest.raises(FixtureLoadError) as excinfo:
            FixtureProvider(entries)
        assert excinfo.value.entry == entry

    def test_duplicate_after_normalisation(self):
        with pytest.raises(FixtureLoadError):
            FixtureProvider({"mit.edu": {}, "www.mit.edu": {}})

    def test_load_from_file_uses_mtime(self, write_json, provider_fixture_data):
        path = write_json("majestic.json", provider_fixture_data)
        provider = fixture_provider(path)
        response = provider.get("probe.test", "trust_flow")
        assert response.value == 41.0
        assert response.source_name == "fixture:majestic.json"
        assert response.retrieved_at > datetime(2000, 1, 1, tzinfo=timezone.utc)

    def test_identical_content_gives_identical_answers(self, write_json, provider_fixture_data):
        first = fixture_provider(write_json("a.json", provider_fixture_data))
        second = fixture_provider(write_json("b.json", provider_fixture_data))
        for metric in first.supported_metrics:
            assert first.get("probe.test", metric).value == second.get("probe.test", metric).value

    def test_invalid_json(self, temp_dir):
        path = temp_dir / "broken.json"
        path.write_text("{not json")
        with pytest.raises(FixtureLoadError):
            fixture_provider(str(path))

    def test_missing_file(self, temp_dir):
        with pytest.raises(FixtureLoadError):
            fixture_provider(str(temp_dir / "absent.json"))


class TestCompositeProvider:

    def test_first_available_wins(self):
        first = FixtureProvider({"a.edu": {"backlinks": None, "trust_flow": 10}}, source_name="first")
        second = FixtureProvider({"a.edu": {"backlinks": 500, "trust_flow": 99}}, source_name="second")
        chain = composite([first, second])
        backlinks = chain.get("a.edu", "backlinks")
        assert (backlinks.value, backlinks.source_name) == (500.0, "second")
        assert chain.get("a.edu", "trust_flow").source_name == "first"

    def test_empty_chain_is_unavailable(self):
        assert not CompositeProvider([]).get("a.edu", "backlinks").available

    def test_transport_errors_propagate(self, mocker):
        failing = mocker.Mock(spec=SearchIndexProvider)
        failing.get.side_effect = ProviderTransportError("down")
        with pytest.raises(ProviderTransportError):
            composite([failing]).get("a.edu", "indexed_pages")


class TestSearch:

    def test_fixture_search_client(self):
        client = FixtureSearchClient({"www.mit.edu": 1500, "ox.ac.uk": None})
        assert indexed_pages_query("mit.edu", client) == 1500
        assert indexed_pages_query("ox.ac.uk", client) is None
        assert indexed_pages_query("other.edu", client) is None

    def test_fixture_search_rejects_bad_counts(self):
        with pytest.raises(FixtureLoadError):
            FixtureSearchClient({"a.edu": -3})
        with pytest.raises(FixtureLoadError):
            FixtureSearchClient({"a.edu": "lots"})

    def test_fixture_search_from_file(self, write_json):
        client = FixtureSearchClient.from_file(write_json("search.json", {"a.edu": 42}))
        assert client.site_count("a.edu") == 42

    def test_search_provider_only_answers_indexed_pages(self):
        provider = SearchIndexProvider(FixtureSearchClient({"a.edu": 42}))
        assert provider.get("a.edu", "indexed_pages").value == 42.0
        assert not provider.get("a.edu", "backlinks").available

    def test_live_client_requires_credentials(self, monkeypatch):
        monkeypatch.setattr("seo_rankminer.core.config.GOOGLE_CSE_API_KEY", None)
        monkeypatch.setattr("seo_rankminer.core.config.GOOGLE_CSE_ENGINE_ID", None)
        with pytest.raises(ProviderPreconditionError):
            GoogleCustomSearchClient()

    def test_live_client_parses_total(self, mocker):
        session = mocker.Mock(spec=requests.Session)
        session.get.return_value.status_code = 200
        session.get.return_value.json.return_value = {"searchInformation": {"totalResults": "12400"}}
        client = GoogleCustomSearchClient(api_key="k", engine_id="e", session=session)
        assert client.site_count("www.mit.edu") == 12400
        assert session.get.call_args.kwargs["params"]["q"] == "site:mit.edu"

    def test_live_client_transport_failure_is_not_zero(self, mocker):
        session = mocker.Mock(spec=requests.Session)
        session.get.side_effect = requests.ConnectionError("unreachable")
        client = GoogleCustomSearchClient(api_key="k", engine_id="e", session=session)
        with pytest.raises(ProviderTransportError):
            client.site_count("mit.edu")

    def test_live_client_rejected_credentials(self, mocker):
        session = mocker.Mock(spec=requests.Session)
        session.get.return_value.status_code = 403
        client = GoogleCustomSearchClient(api_key="k", engine_id="e", session=session)
        with pytest.raises(ProviderTransportError):
            client.site_count("mit.edu")
