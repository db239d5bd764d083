"""In-memory backend: one dict per store plus a lazily sorted key list.

Point ops are O(1); the sorted view is rebuilt on the first scan after a
key set change. Scans copy their key range up front, which is what gives
them snapshot isolation.
"""

import bisect
import threading
from typing import Dict, Iterator, List, Optional, Tuple

from selfsearch.storage.base import (
    STORES,
    Storage,
    StorageConfig,
    StorageStats,
    StoreStats,
    prefix_upper_bound,
)


class _MemStore:
    def __init__(self) -> None:
        self.data: Dict[bytes, bytes] = {}
        self.sorted_keys: Optional[List[bytes]] = None  # None = dirty

    def keys_in_order(self) -> List[bytes]:
        if self.sorted_keys is None:
            self.sorted_keys = sorted(self.data)
        return self.sorted_keys


class MemoryStorage(Storage):
    backend = "memory"

    def __init__(self, config: StorageConfig) -> None:
        super().__init__()
        self.config = config
        self._stores = {name: _MemStore() for name in STORES}
        self._lock = threading.RLock()

    def put(self, store: str, key: bytes, value: bytes) -> None:
        self._check_open()
        self._check_store(store)
        self._check_key(key)
        self._check_value(value)
        key, value = bytes(key), bytes(value)
        with self._lock:
            st = self._stores[store]
            if key not in st.data:
                st.sorted_keys = None
            st.data[key] = value

    def get(self, store: str, key: bytes) -> Optional[bytes]:
        self._check_open()
        self._check_store(store)
        return self._stores[store].data.get(bytes(key))

    def delete(self, store: str, key: bytes) -> None:
        self._check_open()
        self._check_store(store)
        self._check_key(key)
        with self._lock:
            st = self._stores[store]
            if st.data.pop(bytes(key), None) is not None:
                st.sorted_keys = None

    def batch_put(self, store: str, entries: List[Tuple[bytes, bytes]]) -> int:
        self._check_open()
        self._check_store(store)
        entries = list(entries)
        for key, value in entries:
            self._check_key(key)
            self._check_value(value)
        entries = [(bytes(k), bytes(v)) for k, v in entries]
        with self._lock:
            st = self._stores[store]
            for key, value in entries:
                if key not in st.data:
                    st.sorted_keys = None
                st.data[key] = value
        return len(entries)

    def range_scan(self, store: str, prefix: bytes = b"") -> Iterator[Tuple[bytes, bytes]]:
        self._check_open()
        self._check_store(store)
        with self._lock:
            st = self._stores[store]
            keys = st.keys_in_order()
            lo = bisect.bisect_left(keys, prefix) if prefix else 0
            upper = prefix_upper_bound(prefix)
            hi = bisect.bisect_left(keys, upper) if upper is not None else len(keys)
            snapshot = [(k, st.data[k]) for k in keys[lo:hi]]
        return self._iterate(snapshot)

    def _iterate(self, snapshot: List[Tuple[bytes, bytes]]) -> Iterator[Tuple[bytes, bytes]]:
        for item in snapshot:
            self._check_open()
            yield item

    def flush(self) -> None:
        self._check_open()

    def compact(self, store: Optional[str] = None) -> None:
        self._check_open()
        if store is not None:
            self._check_store(store)

    def stats(self) -> StorageStats:
        self._check_open()
        out = StorageStats()
        with self._lock:
            for name, st in self._stores.items():
                out.stores[name] = StoreStats(
                    entry_count=len(st.data),
                    total_key_bytes=sum(len(k) for k in st.data),
                    total_value_bytes=sum(len(v) for v in st.data.values()),
                    segment_count=0,
                )
        return out

    def close(self) -> None:
        self._closed = True
