"""Exception hierarchy shared by all selfsearch modules."""


class SelfSearchError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SelfSearchError):
    """Caller supplied an invalid argument (bad key, empty query, k=0, ...)."""


class UsageError(SelfSearchError):
    """Operation invoked against a closed or otherwise unusable handle."""


class IngestionError(ValidationError):
    """Document rejected during indexing (e.g. duplicate external id)."""


class StorageError(SelfSearchError):
    """IO-level failure in the storage layer."""


class LockError(StorageError):
    """Data directory already locked by another live handle."""


class CorruptionError(StorageError):
    """Checksum mismatch in a segment, journal, or snapshot file."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


class NotReadyError(StorageError):
    """Index has not been finalized and cannot serve queries."""
