import csv
import io
import os
import logging
from collections import Counter
from typing import List
from urllib.parse import urlsplit

from ...models.dataset_models import SiteEntry
from ..errors import DatasetParseError


def validate_file(file_path):
    """
    Validates an input file before reading it.

    Args:
        file_path: Path to the file to validate.

    Returns:
        A tuple (is_valid, message) where is_valid is a boolean and message is an error message if invalid.
    """
    if not os.path.exists(file_path):
        return False, f"File not found: {file_path}"
    if not os.path.isfile(file_path):
        return False, f"Not a file: {file_path}"
    if not os.access(file_path, os.R_OK):
        return False, f"File is not readable: {file_path}"
    return True, "File is valid"


def _entry(first: str, rank_text: str, line: int) -> SiteEntry:
    first = first.strip()
    if not first:
        raise DatasetParseError("domain is empty", row=line, column="domain")
    try:
        rank = int(rank_text.strip())
    except ValueError:
        raise DatasetParseError(f"'{rank_text.strip()}' is not an integer rank", row=line,
                                column="webometric_rank") from None
    if "://" in first:
        parts = urlsplit(first)
        if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
            raise DatasetParseError(f"'{first}' is not an http(s) URL", row=line, column="domain")
        return SiteEntry(domain=parts.netloc.lower(), webometric_rank=rank, url=first)
    return SiteEntry(domain=first.lower().rstrip("/"), webometric_rank=rank)


def parse_sites(text: str) -> List[SiteEntry]:
    """
    Parse a sites file: one "domain,rank" pair per line, optional header.

    A full URL may stand in for the domain; it is then fetched as given.

    Raises:
        DatasetParseError: For rows without exactly two fields or with a non-integer rank.
    """
    entries = []
    reader = csv.reader(io.StringIO(text))
    for cells in reader:
        line = reader.line_num
        if not cells or not "".join(cells).strip() or cells[0].lstrip().startswith("#"):
            continue
        if len(cells) != 2:
            raise DatasetParseError(f"expected 'domain,rank', found {len(cells)} fields", row=line)
        if not entries and cells[1].strip().lower() in ("rank", "webometric_rank"):
            continue
        entries.append(_entry(cells[0], cells[1], line))
    return entries


def read_sites_file(file_path) -> List[SiteEntry]:
    """
    Read and parse a sites file.

    Raises:
        OSError: If the file cannot be read.
        DatasetParseError: If a row is malformed.
    """
    is_valid, message = validate_file(file_path)
    if not is_valid:
        raise OSError(message)
    with open(file_path, "r", encoding="utf-8-sig") as f:
        entries = parse_sites(f.read())
    logging.debug(f"Read {len(entries)} sites from {file_path}")
    return entries


def duplicate_domains(entries: List[SiteEntry]) -> List[str]:
    """Domains listed more than once, in first-seen order."""
    counts = Counter(e.domain for e in entries)
    return [d for d in dict.fromkeys(e.domain for e in entries) if counts[d] > 1]


def write_bytes(path, data: bytes) -> None:
    """Write output, creating parent directories as needed."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as f:
        f.write(data)
