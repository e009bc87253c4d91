"""Exception hierarchy for SEO RankMiner."""
from typing import Optional


class RankMinerError(Exception):
    """Base class for all SEO RankMiner errors."""


class ConfigError(RankMinerError, ValueError):
    """Run configuration could not be read or failed validation."""


# Fetch -------------------------------------------------------------------

class FetchError(RankMinerError, IOError):
    """A network fetch failed before a usable response was received."""

    def __init__(self, message: str, url: Optional[str] = None):
        super().__init__(message)
        self.url = url


class DnsFailure(FetchError):
    """The host name could not be resolved."""


class FetchTimeout(FetchError):
    """The connection or read exceeded the policy timeout."""


class TooManyRedirects(FetchError):
    """The redirect chain exceeded the policy cap."""


class TlsError(FetchError):
    """TLS negotiation or certificate verification failed."""


class ConnectionFailure(FetchError):
    """Any other transport failure (refused, reset, malformed response)."""


class ProbeDisallowed(FetchError):
    """robots.txt disallows the probe URL for our user agent."""


# Dataset -----------------------------------------------------------------

class DatasetParseError(RankMinerError, ValueError):
    """Dataset CSV is malformed.

    Attributes:
        row: 1-based line number in the CSV (the header is line 1), if known.
        column: Column name involved, if known.
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")
        self.row = row
        self.column = column


# Analysis ----------------------------------------------------------------

class AnalysisError(RankMinerError, ValueError):
    """A statistical or mining operation cannot produce a result."""


class InsufficientDataError(AnalysisError):
    """Fewer than the minimum number of non-missing values."""


class UndefinedImpactError(AnalysisError):
    """Correlation is undefined because one side has zero variance."""


class LogDomainError(AnalysisError):
    """A shifted value is not strictly positive."""


class DegenerateBinsError(AnalysisError):
    """Fewer than two distinct values, so bins cannot be formed."""


class OutOfRangeError(AnalysisError):
    """A value lies outside the binning scheme's edges."""


# Providers ---------------------------------------------------------------

class ProviderError(RankMinerError):
    """Base class for metric provider errors."""


class ProviderPreconditionError(ProviderError, ValueError):
    """A provider was asked for a metric that is not provider-sourced."""


class ProviderTransportError(ProviderError, IOError):
    """A live provider or search client failed to answer."""


class FixtureLoadError(ProviderError, ValueError):
    """A fixture file is malformed.

    Attributes:
        entry: The offending entry, e.g. ``"mit.edu.trust_flow"``.
    """

    def __init__(self, message: str, entry: Optional[str] = None):
        super().__init__(f"{entry}: {message}" if entry else message)
        self.entry = entry
