"""
Constants used throughout the SEO RankMiner application.
This file centralizes constants that might otherwise be hardcoded in multiple places.
"""

# Fetch defaults
DEFAULT_TIMEOUT_MS = 15000
DEFAULT_MAX_REDIRECTS = 5
DEFAULT_MAX_BODY_KB = 5120
DEFAULT_MAX_CONCURRENT = 8
DEFAULT_PER_HOST_DELAY_MS = 500
DEFAULT_BROKEN_LINK_SAMPLE = 50
DEFAULT_USER_AGENT = "seo-rankminer/0.1 (+https://pypi.org/project/seo-rankminer/)"
DEFAULT_SCHEME = "https"
MAX_STYLESHEETS = 10
STREAM_CHUNK_SIZE = 16384

# Content encodings counted as compressed transfer
COMPRESSED_ENCODINGS = frozenset({"gzip", "x-gzip", "deflate", "br", "zstd"})

# Statistics defaults
DEFAULT_LOG_SHIFT = 1.0
DEFAULT_MAX_ABS_SKEW = 1.0
DEFAULT_MAX_ABS_KURTOSIS = 2.0
MIN_ANALYSIS_VALUES = 3

# Mining defaults
DEFAULT_BINS = 5
DEFAULT_MIN_SUPPORT_PCT = 5.0
DEFAULT_MIN_CONFIDENCE_PCT = 60.0
DEFAULT_TOP_N = 30
DEFAULT_FEATURE_K = 14
DEFAULT_MAX_ANTECEDENT = 4
PERCENT_TOLERANCE = 1e-9
RECONSTRUCT_TOLERANCE = 0.01

# The consequent attribute of every mined rule
RANK_ATTRIBUTE = "webometric_rank"
RANK_LABEL = "Webometric rank"

# Hosts whose links count as social media presence
DEFAULT_SOCIAL_DOMAINS = [
    "facebook.com",
    "twitter.com",
    "x.com",
    "instagram.com",
    "linkedin.com",
    "youtube.com",
]

# Webometric ranking indicator weights quoted in impact reports
WEBOMETRIC_WEIGHTS = {"visibility": 50, "size": 20}

# Output
REPORT_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S UTC"
REPLAY_DATASET_FILENAME = "replay_dataset.csv"
