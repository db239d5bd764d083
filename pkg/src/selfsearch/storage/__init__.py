"""Sorted key-value storage with two interchangeable backends."""

from selfsearch.storage.base import (
    MAX_KEY_BYTES,
    STORE_IDS,
    STORES,
    Storage,
    StorageConfig,
    StorageStats,
    StoreStats,
    TOMBSTONE,
    prefix_upper_bound,
)


def open_storage(config: StorageConfig) -> Storage:
    """Open a handle to the four stores using the configured backend."""
    config.validate()
    if config.backend == "memory":
        from selfsearch.storage.memory import MemoryStorage

        return MemoryStorage(config)
    from selfsearch.storage.lsm import LsmStorage

    return LsmStorage(config)


__all__ = [
    "MAX_KEY_BYTES",
    "STORES",
    "STORE_IDS",
    "Storage",
    "StorageConfig",
    "StorageStats",
    "StoreStats",
    "TOMBSTONE",
    "open_storage",
    "prefix_upper_bound",
]
