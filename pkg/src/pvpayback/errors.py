"""Exception hierarchy and process exit codes.

Every error raised by this package derives from :class:`PvPaybackError` so
callers can distinguish expected failures (bad config, bad input files) from
genuine bugs. The CLI maps each class to a distinct exit code.
"""

from __future__ import annotations

EXIT_CONFIG = 2
EXIT_INGESTION = 3
EXIT_INTERNAL = 4


class PvPaybackError(Exception):
    """Base class for all package errors."""


class ConfigError(PvPaybackError):
    """Invalid configuration: malformed catalog/contract/schedule data or
    inconsistent run parameters."""


class MissingProductError(ConfigError):
    """A product lookup hit an empty catalog list."""


class IngestionError(PvPaybackError):
    """A profile CSV failed validation (gaps, duplicates, negatives, wrong
    interval or coverage). Messages carry the offending row numbers."""


class OracleLimitError(PvPaybackError):
    """A verification-oracle call exceeded its resource guards."""


class InternalCheckError(PvPaybackError):
    """A post-solve invariant check failed; indicates a bug, not bad input."""
