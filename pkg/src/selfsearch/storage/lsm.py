"""Mini-LSM backend: write-ahead journal, one memtable, flat L0 segments.

Writes land in the journal and the in-memory table; flush() turns the
memtable into a new sorted segment per store and truncates the journal.
Reads merge the memtable with all segments, newest version winning.
Compaction k-way merges every segment of a store into one, dropping
tombstones and shadowed versions. A flocked LOCK file enforces the
single-writer-per-directory rule.

On-disk layout: <data_dir>/LOCK, <data_dir>/journal.wal,
<data_dir>/<store>/seg-<6 digits>.tbl
"""

import fcntl
import heapq
import itertools
import os
import re
import threading
from typing import Dict, Iterator, List, Optional, Tuple

from selfsearch.errors import LockError, StorageError, UsageError
from selfsearch.storage import journal as wal
from selfsearch.storage.base import (
    STORES,
    STORE_IDS,
    TOMBSTONE,
    Storage,
    StorageConfig,
    StorageStats,
    StoreStats,
)
from selfsearch.storage.segment import Segment, write_segment

MAX_SEGMENTS = 8
_SEG_RE = re.compile(r"^seg-(\d{6})\.tbl$")
_MISSING = object()
_ENTRY_OVERHEAD = 32


def _entry_size(key: bytes, value) -> int:
    n = len(key) + _ENTRY_OVERHEAD
    if value is not TOMBSTONE:
        n += len(value)
    return n


def _fsync_dir(path: str) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


class _LsmStore:
    def __init__(self, name: str, directory: str):
        self.name = name
        self.sid = STORE_IDS[name]
        self.dir = directory
        self.segments: List[Segment] = []  # oldest -> newest; treated as immutable
        self.mem: Dict[bytes, object] = {}
        self.next_seq = 1


class LsmStorage(Storage):
    backend = "lsm"

    def __init__(self, config: StorageConfig):
        super().__init__()
        self.config = config
        self.data_dir = config.data_dir
        self._wlock = threading.RLock()
        try:
            os.makedirs(self.data_dir, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create data_dir {self.data_dir}: {exc}") from exc
        self._acquire_lock()
        try:
            self._stores = {
                name: _LsmStore(name, os.path.join(self.data_dir, name))
                for name in STORES
            }
            self._stores_by_id = {st.sid: st for st in self._stores.values()}
            for st in self._stores.values():
                os.makedirs(st.dir, exist_ok=True)
                self._load_segments(st)
            self._mem_bytes = 0
            journal_path = os.path.join(self.data_dir, "journal.wal")
            for sid, op, key, value in wal.replay(journal_path):
                st = self._stores_by_id.get(sid)
                if st is None:
                    continue
                self._apply(st, key, value if op == wal.OP_PUT else TOMBSTONE)
            self._journal = wal.Journal(journal_path)
        except BaseException:
            self._release_lock()
            raise

    # -- lifecycle -----------------------------------------------------------

    def _acquire_lock(self) -> None:
        path = os.path.join(self.data_dir, "LOCK")
        fd = os.open(path, os.O_CREAT | os.O_RDWR, 0o644)
        try:
            fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            os.close(fd)
            raise LockError(f"data directory locked by another handle: {self.data_dir}")
        self._lock_fd = fd

    def _release_lock(self) -> None:
        try:
            fcntl.flock(self._lock_fd, fcntl.LOCK_UN)
        finally:
            os.close(self._lock_fd)

    def _load_segments(self, st: _LsmStore) -> None:
        found = []
        for fname in os.listdir(st.dir):
            m = _SEG_RE.match(fname)
            if m:
                found.append((int(m.group(1)), fname))
        found.sort()
        for seq, fname in found:
            st.segments.append(Segment(os.path.join(st.dir, fname)))
            st.next_seq = seq + 1

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._journal.close()
        for st in self._stores.values():
            for seg in st.segments:
                seg.close()
        self._release_lock()

    # -- writes --------------------------------------------------------------

    def _apply(self, st: _LsmStore, key: bytes, value) -> None:
        old = st.mem.get(key, _MISSING)
        if old is not _MISSING:
            self._mem_bytes -= _entry_size(key, old)
        st.mem[key] = value
        self._mem_bytes += _entry_size(key, value)

    def _maybe_autoflush(self) -> None:
        if self._mem_bytes >= self.config.memtable_flush_bytes:
            self.flush()

    def put(self, store: str, key: bytes, value: bytes) -> None:
        self._check_open()
        self._check_store(store)
        self._check_key(key)
        self._check_value(value)
        key, value = bytes(key), bytes(value)
        with self._wlock:
            st = self._stores[store]
            self._journal.append([(st.sid, wal.OP_PUT, key, value)])
            self._apply(st, key, value)
            self._maybe_autoflush()

    def delete(self, store: str, key: bytes) -> None:
        self._check_open()
        self._check_store(store)
        self._check_key(key)
        key = bytes(key)
        with self._wlock:
            st = self._stores[store]
            self._journal.append([(st.sid, wal.OP_DEL, key, b"")])
            self._apply(st, key, TOMBSTONE)
            self._maybe_autoflush()

    def batch_put(self, store: str, entries: List[Tuple[bytes, bytes]]) -> int:
        self._check_open()
        self._check_store(store)
        for key, value in entries:
            self._check_key(key)
            self._check_value(value)
        entries = [(bytes(k), bytes(v)) for k, v in entries]
        if not entries:
            return 0
        with self._wlock:
            st = self._stores[store]
            self._journal.append([(st.sid, wal.OP_PUT, k, v) for k, v in entries])
            for key, value in entries:
                self._apply(st, key, value)
            self._maybe_autoflush()
        return len(entries)

    def flush(self) -> None:
        self._check_open()
        with self._wlock:
            wrote = False
            for st in self._stores.values():
                if not st.mem:
                    continue
                items = sorted(st.mem.items())
                tombs = sum(1 for _, v in items if v is TOMBSTONE)
                seg = self._write_new_segment(st, items, tombs)
                st.segments = st.segments + [seg]
                st.mem = {}
                wrote = True
            self._mem_bytes = 0
            self._journal.truncate(sync=self.config.sync_on_flush)
            if wrote:
                for st in self._stores.values():
                    if len(st.segments) > MAX_SEGMENTS:
                        self._compact_store(st)

    def _write_new_segment(self, st: _LsmStore, items, tombstones: int) -> Segment:
        seq = st.next_seq
        st.next_seq += 1
        path = os.path.join(st.dir, f"seg-{seq:06d}.tbl")
        write_segment(path, items, sync=self.config.sync_on_flush)
        if self.config.sync_on_flush:
            _fsync_dir(st.dir)
        seg = Segment(path)
        seg.note_tombstones(tombstones)
        return seg

    def compact(self, store: Optional[str] = None) -> None:
        self._check_open()
        if store is not None:
            self._check_store(store)
        self.flush()
        with self._wlock:
            for st in self._stores.values():
                if store is None or st.name == store:
                    self._compact_store(st)

    def _compact_store(self, st: _LsmStore) -> None:
        segs = st.segments
        if not segs:
            return
        if len(segs) == 1 and not segs[0].has_tombstones():
            return
        merged = _merge([seg.scan() for seg in segs], self)
        first = next(merged, None)
        if first is None:
            st.segments = []
        else:
            seg = self._write_new_segment(st, itertools.chain([first], merged), 0)
            st.segments = [seg]
        for old in segs:
            try:
                os.unlink(old.path)
            except OSError:
                pass
        if self.config.sync_on_flush:
            _fsync_dir(st.dir)

    # -- reads ---------------------------------------------------------------

    def get(self, store: str, key: bytes) -> Optional[bytes]:
        self._check_open()
        self._check_store(store)
        st = self._stores[store]
        key = bytes(key)
        value = st.mem.get(key, _MISSING)
        if value is not _MISSING:
            return None if value is TOMBSTONE else value
        for seg in reversed(st.segments):
            found = seg.get(key)
            if found is not None:
                return None if found is TOMBSTONE else found
        return None

    def range_scan(self, store: str, prefix: bytes = b"") -> Iterator[Tuple[bytes, bytes]]:
        self._check_open()
        self._check_store(store)
        st = self._stores[store]
        with self._wlock:
            mem_items = sorted(
                (k, v) for k, v in st.mem.items() if k.startswith(prefix)
            )
            segs = st.segments
        sources = [seg.scan(prefix) for seg in segs]
        sources.append(iter(mem_items))
        return _merge(sources, self)

    def stats(self) -> StorageStats:
        self._check_open()
        out = StorageStats()
        for name, st in self._stores.items():
            s = StoreStats(segment_count=len(st.segments))
            for key, value in self.range_scan(name):
                s.entry_count += 1
                s.total_key_bytes += len(key)
                s.total_value_bytes += len(value)
            out.stores[name] = s
        return out


def _merge(sources: List[Iterator], handle: Optional[LsmStorage]) -> Iterator[Tuple[bytes, bytes]]:
    """K-way merge of (key, value-or-tombstone) iterators.

    Later sources are newer and win on duplicate keys; tombstoned keys are
    suppressed. Sources must each be key-ascending and duplicate-free.
    """
    heap = []
    for gen, it in enumerate(sources):
        entry = next(it, None)
        if entry is not None:
            heap.append((entry[0], -gen, it, entry[1]))
    heapq.heapify(heap)
    last = None
    while heap:
        if handle is not None and handle._closed:
            raise UsageError("storage handle closed mid-scan")
        key, neg_gen, it, value = heapq.heappop(heap)
        try:
            entry = next(it, None)
        except ValueError as exc:  # segment mmap released by close()
            raise UsageError("storage handle closed mid-scan") from exc
        if entry is not None:
            heapq.heappush(heap, (entry[0], neg_gen, it, entry[1]))
        if key == last:
            continue
        last = key
        if value is not TOMBSTONE:
            yield key, value
