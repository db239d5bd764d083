"""Storage contract shared by the memory and LSM backends.

Four independent key namespaces ("stores") live behind one handle:
postings, df, docs, and meta. Keys are byte strings kept in lexicographic
order; every backend supports point ops, atomic batches, and ordered
prefix range scans with snapshot semantics.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from selfsearch.errors import UsageError, ValidationError

STORES: Tuple[str, ...] = ("postings", "df", "docs", "meta")
STORE_IDS: Dict[str, int] = {name: i for i, name in enumerate(STORES)}

MAX_KEY_BYTES = 4096
MIN_FLUSH_BYTES = 64 * 1024

# Marker for deleted keys inside memtables and segments.
TOMBSTONE = object()


@dataclass
class StorageConfig:
    data_dir: Optional[str] = None
    memtable_flush_bytes: int = 4 * 1024 * 1024
    sync_on_flush: bool = True
    backend: str = "lsm"

    def validate(self) -> None:
        if self.backend not in ("memory", "lsm"):
            raise ValidationError(f"unknown backend {self.backend!r}")
        if self.memtable_flush_bytes < MIN_FLUSH_BYTES:
            raise ValidationError(
                f"memtable_flush_bytes must be >= {MIN_FLUSH_BYTES}"
            )
        if self.backend == "lsm" and not self.data_dir:
            raise ValidationError("lsm backend requires data_dir")


@dataclass
class StoreStats:
    entry_count: int = 0
    total_key_bytes: int = 0
    total_value_bytes: int = 0
    segment_count: int = 0


@dataclass
class StorageStats:
    stores: Dict[str, StoreStats] = field(default_factory=dict)

    def total_entries(self) -> int:
        return sum(s.entry_count for s in self.stores.values())


def prefix_upper_bound(prefix: bytes) -> Optional[bytes]:
    """Smallest key greater than every key starting with ``prefix``.

    None means unbounded (empty prefix, or a prefix of all 0xFF bytes).
    """
    p = bytearray(prefix)
    while p and p[-1] == 0xFF:
        p.pop()
    if not p:
        return None
    p[-1] += 1
    return bytes(p)


class Storage:
    """Abstract handle over the four stores."""

    backend = "?"

    def __init__(self) -> None:
        self._closed = False

    # -- validation helpers -------------------------------------------------

    def _check_open(self) -> None:
        if self._closed:
            raise UsageError("storage handle is closed")

    @staticmethod
    def _check_store(store: str) -> None:
        if store not in STORE_IDS:
            raise ValidationError(f"unknown store {store!r}")

    @staticmethod
    def _check_key(key: bytes) -> None:
        if not isinstance(key, (bytes, bytearray)):
            raise ValidationError("key must be bytes")
        if len(key) == 0:
            raise ValidationError("key must be non-empty")
        if len(key) > MAX_KEY_BYTES:
            raise ValidationError(f"key longer than {MAX_KEY_BYTES} bytes")

    @staticmethod
    def _check_value(value: bytes) -> None:
        if not isinstance(value, (bytes, bytearray)):
            raise ValidationError("value must be bytes")

    # -- interface -----------------------------------------------------------

    def put(self, store: str, key: bytes, value: bytes) -> None:
        raise NotImplementedError

    def get(self, store: str, key: bytes) -> Optional[bytes]:
        raise NotImplementedError

    def delete(self, store: str, key: bytes) -> None:
        raise NotImplementedError

    def batch_put(self, store: str, entries: List[Tuple[bytes, bytes]]) -> int:
        raise NotImplementedError

    def range_scan(self, store: str, prefix: bytes = b"") -> Iterator[Tuple[bytes, bytes]]:
        raise NotImplementedError

    def flush(self) -> None:
        raise NotImplementedError

    def compact(self, store: Optional[str] = None) -> None:
        """Merge one store's segments, or every store's when None."""
        raise NotImplementedError

    def stats(self) -> StorageStats:
        raise NotImplementedError

    def close(self) -> None:
        raise NotImplementedError

    def __enter__(self) -> "Storage":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
