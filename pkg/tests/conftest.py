"""Shared fixtures for SEO RankMiner tests."""
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, Generator, List, Optional

import pytest

# Make the package and the test support helpers importable without installation
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, os.path.dirname(__file__))

from seo_rankminer.core.dataset_io import load_replay_dataset
from seo_rankminer.models.config_models import FetchPolicy, RunConfig
from seo_rankminer.models.dataset_models import Dataset, SiteRecord
from support.probe_server import ProbeServer

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


@pytest.fixture
def fast_policy() -> FetchPolicy:
    """Fetch policy without per-host spacing so tests stay quick."""
    return FetchPolicy(per_host_delay_ms=0, timeout_ms=5000, max_concurrent=4)


@pytest.fixture
def fast_config(fast_policy: FetchPolicy) -> RunConfig:
    return RunConfig(fetch=fast_policy)


@pytest.fixture
def probe_server() -> Generator[ProbeServer, None, None]:
    """A running local probe server; tests flip its switches through ``state``."""
    server = ProbeServer().start()
    try:
        yield server
    finally:
        server.stop()


@pytest.fixture(scope="session")
def replay_dataset() -> Dataset:
    """The bundled 75-site replay dataset."""
    return load_replay_dataset()


@pytest.fixture(scope="session")
def replay_dataset_path() -> str:
    from importlib import resources
    return str(resources.files("seo_rankminer").joinpath("data").joinpath("replay_dataset.csv"))


def make_dataset(ranks: List[int], **series: List[Optional[float]]) -> Dataset:
    """Build a dataset of sites ``site1.test``, ``site2.test``... from per-metric columns."""
    records = []
    for i, rank in enumerate(ranks):
        values = {metric: column[i] for metric, column in series.items()}
        records.append(SiteRecord(domain=f"site{i + 1}.test", webometric_rank=rank, values=values))
    return Dataset(records=tuple(records))


@pytest.fixture
def small_dataset() -> Dataset:
    """Six sites with a clean log-linear backlink relation and a few flags."""
    return make_dataset(
        [1, 2, 3, 4, 5, 6],
        backlinks=[10.0 ** 6, 10.0 ** 5, 10.0 ** 4, 10.0 ** 3, 10.0 ** 2, 10.0],
        trust_flow=[60.0, 50.0, 42.0, 30.0, 25.0, 11.0],
        gzip=[1.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        title_chars=[30.0, None, 25.0, 41.0, 12.0, 33.0],
    )


@pytest.fixture
def write_json(temp_dir: Path):
    """Write a JSON document into the temp dir and return its path."""
    def _write(name: str, content: Any) -> str:
        path = temp_dir / name
        path.write_text(json.dumps(content), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def provider_fixture_data() -> Dict[str, Dict[str, Any]]:
    return {
        "probe.test": {
            "backlinks": 120000,
            "trust_flow": 41,
            "page_rank": 6,
            "domain_authority": 70,
            "indexed_pages": None,
        },
        "www.other.test": {"alexa_rank": 5400},
    }


@pytest.fixture(scope="session")
def html_corpus() -> Dict[str, Dict[str, Any]]:
    """Hand-counted ground truth keyed by fixture file name."""
    with open(FIXTURES_DIR / "html" / "ground_truth.json", "r", encoding="utf-8") as f:
        return json.load(f)


def read_html_fixture(name: str) -> bytes:
    return (FIXTURES_DIR / "html" / name).read_bytes()
