# Re-export utility functions
from .file_utils import validate_file, read_sites_file, parse_sites, duplicate_domains, write_bytes
from .logging_utils import setup_logging
