"""Dataset CSV serialization and structural validation."""
import csv
import io
import logging
import math
import re
from importlib import resources
from typing import Dict, List, Optional, Union

from ..models.dataset_models import Dataset, SiteRecord, Violation
from ..models.metric_models import MetricId, MetricRegistry, builtin_registry
from . import constants
from .errors import DatasetParseError

logger = logging.getLogger(__name__)

FIXED_COLUMNS = ["domain", "webometric_rank"]

_HOSTNAME = re.compile(
    r"^(?=.{1,253}$)([a-z0-9]([a-z0-9-]{0,61}[a-z0-9])?)(\.[a-z0-9]([a-z0-9-]{0,61}[a-z0-9])?)*(:\d{1,5})?$",
    re.IGNORECASE,
)


def validate_dataset(dataset: Dataset) -> List[Violation]:
    """Check every record against the dataset invariants.

    Args:
        dataset: The dataset to check.

    Returns:
        All violations found, in record order. An empty list means valid.
    """
    violations: List[Violation] = []
    seen: Dict[str, str] = {}

    for record in dataset.records:
        domain_key = record.domain.strip().lower()
        if not _HOSTNAME.match(record.domain.strip()):
            violations.append(Violation(
                rule="domain-hostname", domain=record.domain,
                message=f"'{record.domain}' is not a host name"))
        if domain_key in seen:
            violations.append(Violation(
                rule="duplicate-domain", domain=record.domain,
                message=f"domain '{record.domain}' duplicates '{seen[domain_key]}'"))
        else:
            seen[domain_key] = record.domain

        if record.webometric_rank < 1:
            violations.append(Violation(
                rule="rank-positive", domain=record.domain, metric=constants.RANK_ATTRIBUTE,
                message=f"{record.domain}: webometric_rank must be >= 1, got {record.webometric_rank}"))

        for descriptor in dataset.registry:
            value = record.values[descriptor.id]
            if value is None:
                continue
            problem = descriptor.check_value(value)
            if problem is not None:
                rule, message = problem
                violations.append(Violation(
                    rule=rule, domain=record.domain, metric=descriptor.id.value,
                    message=f"{record.domain}: {message}"))

    return violations


def _format_value(value: Optional[float]) -> str:
    if value is None:
        return ""
    if math.isfinite(value) and float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def save_dataset_csv(dataset: Dataset) -> bytes:
    """Serialize a dataset: header then one row per record, empty cell = missing."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    metric_ids = dataset.registry.ids()
    writer.writerow(FIXED_COLUMNS + [m.value for m in metric_ids])
    for record in dataset.records:
        writer.writerow(
            [record.domain, str(record.webometric_rank)]
            + [_format_value(record.values[m]) for m in metric_ids]
        )
    return buffer.getvalue().encode("utf-8")


def load_dataset_csv(data: Union[bytes, str], registry: Optional[MetricRegistry] = None) -> Dataset:
    """Parse dataset CSV bytes.

    Metric columns may be any subset of the registry in any order; absent
    columns load as missing values.

    Raises:
        DatasetParseError: On malformed input, naming the row and column.
    """
    registry = registry or builtin_registry()
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as e:
            raise DatasetParseError(f"not valid UTF-8: {e}") from e
    else:
        text = data

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetParseError("empty input, expected a header row", row=1) from None
    except csv.Error as e:
        raise DatasetParseError(str(e), row=1) from e

    header = [h.strip() for h in header]
    if header[:2] != FIXED_COLUMNS:
        raise DatasetParseError("header must start with 'domain,webometric_rank'", row=1)

    metric_columns: List[MetricId] = []
    for name in header[2:]:
        if name not in registry:
            raise DatasetParseError("unknown metric column", row=1, column=name)
        metric_id = MetricId(name)
        if metric_id in metric_columns:
            raise DatasetParseError("duplicate metric column", row=1, column=name)
        metric_columns.append(metric_id)

    records = []
    line = 1
    try:
        for cells in reader:
            line = reader.line_num
            if not cells or (len(cells) == 1 and not cells[0].strip()):
                continue
            if len(cells) != len(header):
                raise DatasetParseError(
                    f"expected {len(header)} fields, found {len(cells)}", row=line)
            records.append(_parse_row(cells, metric_columns, line))
    except csv.Error as e:
        raise DatasetParseError(str(e), row=line) from e

    logger.debug(f"Loaded dataset with {len(records)} records and {len(metric_columns)} metric columns")
    return Dataset(records=tuple(records), registry=registry)


def _parse_row(cells: List[str], metric_columns: List[MetricId], line: int) -> SiteRecord:
    domain = cells[0].strip()
    if not domain:
        raise DatasetParseError("domain is empty", row=line, column="domain")

    rank_text = cells[1].strip()
    try:
        rank = int(rank_text)
    except ValueError:
        raise DatasetParseError(
            f"'{rank_text}' is not an integer", row=line, column="webometric_rank") from None

    values: Dict[MetricId, Optional[float]] = {}
    for metric_id, cell in zip(metric_columns, cells[2:]):
        cell = cell.strip()
        if not cell:
            values[metric_id] = None
            continue
        try:
            value = float(cell)
        except ValueError:
            value = math.nan
        # float() also accepts nan/inf spellings
        if not math.isfinite(value):
            raise DatasetParseError(
                f"'{cell}' is not a number", row=line, column=metric_id.value)
        values[metric_id] = value
    return SiteRecord(domain=domain, webometric_rank=rank, values=values)


def load_dataset(path: str, registry: Optional[MetricRegistry] = None) -> Dataset:
    """Read a dataset CSV file from disk."""
    with open(path, "rb") as f:
        return load_dataset_csv(f.read(), registry)


def save_dataset(dataset: Dataset, path: str) -> None:
    """Write a dataset CSV file to disk."""
    with open(path, "wb") as f:
        f.write(save_dataset_csv(dataset))


def load_replay_dataset() -> Dataset:
    """The bundled 75-site replay dataset used for reproducible runs and examples."""
    data = resources.files("seo_rankminer").joinpath("data").joinpath(constants.REPLAY_DATASET_FILENAME).read_bytes()
    return load_dataset_csv(data)
