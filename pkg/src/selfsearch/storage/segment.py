"""Immutable sorted segment files.

Layout:

    magic 'SSEG' | version 0x01 | flags 0x00
    records: key_len u32-LE | key | val_len u32-LE | value
             (val_len 0xFFFFFFFF marks a tombstone and carries no value)
    index block: count u32-LE, then count * (key_len u32-LE | key | offset u64-LE)
                 holding every 64th record key and its file offset
    index block offset u64-LE
    checksum u64-LE: 64-bit FNV-1a over all preceding bytes

Readers mmap the file once and slice records out of the buffer, so any
number of scans can run concurrently against one open segment.
"""

import bisect
import mmap
import os
import struct
from typing import Iterable, Iterator, List, Optional, Tuple, Union

from selfsearch.errors import CorruptionError, StorageError
from selfsearch.kernels import fnv1a64
from selfsearch.storage.base import TOMBSTONE, prefix_upper_bound

MAGIC = b"SSEG"
VERSION = 0x01
FLAGS = 0x00
TOMBSTONE_LEN = 0xFFFFFFFF
INDEX_EVERY = 64

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")

Value = Union[bytes, object]  # bytes or the TOMBSTONE sentinel


def write_segment(path: str, items: Iterable[Tuple[bytes, Value]], sync: bool = True) -> int:
    """Write sorted (key, value-or-tombstone) items to a new segment file.

    Returns the number of records written. The file appears atomically:
    data goes to a temp file that is renamed into place.
    """
    tmp = path + ".tmp"
    h = fnv1a64(b"")
    offset = 0
    index: List[Tuple[bytes, int]] = []
    count = 0
    try:
        with open(tmp, "wb") as f:

            def emit(chunk: bytes) -> None:
                nonlocal h, offset
                f.write(chunk)
                h = fnv1a64(chunk, h)
                offset += len(chunk)

            emit(MAGIC + bytes([VERSION, FLAGS]))
            buf = bytearray()
            for key, value in items:
                if count % INDEX_EVERY == 0:
                    if buf:
                        emit(bytes(buf))
                        buf.clear()
                    index.append((key, offset))
                buf += _U32.pack(len(key))
                buf += key
                if value is TOMBSTONE:
                    buf += _U32.pack(TOMBSTONE_LEN)
                else:
                    buf += _U32.pack(len(value))
                    buf += value
                count += 1
            if buf:
                emit(bytes(buf))
            index_offset = offset
            ibuf = bytearray(_U32.pack(len(index)))
            for key, off in index:
                ibuf += _U32.pack(len(key))
                ibuf += key
                ibuf += _U64.pack(off)
            ibuf += _U64.pack(index_offset)
            emit(bytes(ibuf))
            f.write(_U64.pack(h))
            if sync:
                f.flush()
                os.fsync(f.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise StorageError(f"failed to write segment {path}: {exc}") from exc
    return count


class Segment:
    """Read view over one segment file."""

    def __init__(self, path: str):
        self.path = path
        try:
            self._file = open(path, "rb")
            size = os.fstat(self._file.fileno()).st_size
            if size < 6 + 4 + 8 + 8:
                raise CorruptionError(f"segment too short: {path}", path)
            self._mm = mmap.mmap(self._file.fileno(), 0, access=mmap.ACCESS_READ)
        except OSError as exc:
            raise StorageError(f"cannot open segment {path}: {exc}") from exc
        buf = self._mm
        if buf[:4] != MAGIC or buf[4] != VERSION:
            raise CorruptionError(f"bad segment header: {path}", path)
        (stored,) = _U64.unpack(buf[size - 8:size])
        if fnv1a64(buf[: size - 8]) != stored:
            raise CorruptionError(f"segment checksum mismatch: {path}", path)
        (self._index_offset,) = _U64.unpack(buf[size - 16: size - 8])
        self._load_index(size)
        self._tombstone_count: Optional[int] = None

    def _load_index(self, size: int) -> None:
        buf = self._mm
        pos = self._index_offset
        (count,) = _U32.unpack(buf[pos: pos + 4])
        pos += 4
        keys: List[bytes] = []
        offsets: List[int] = []
        for _ in range(count):
            (klen,) = _U32.unpack(buf[pos: pos + 4])
            pos += 4
            keys.append(bytes(buf[pos: pos + klen]))
            pos += klen
            (off,) = _U64.unpack(buf[pos: pos + 8])
            pos += 8
            offsets.append(off)
        if pos != size - 16:
            raise CorruptionError(f"segment index malformed: {self.path}", self.path)
        self._index_keys = keys
        self._index_offsets = offsets

    def _seek_offset(self, key: bytes) -> int:
        """File offset of the greatest indexed record with key <= key."""
        if not self._index_keys:
            return self._index_offset  # empty segment: start == index block
        i = bisect.bisect_right(self._index_keys, key) - 1
        if i < 0:
            i = 0
        return self._index_offsets[i]

    def _records_from(self, offset: int) -> Iterator[Tuple[bytes, Value]]:
        buf = self._mm
        end = self._index_offset
        pos = offset
        while pos < end:
            (klen,) = _U32.unpack(buf[pos: pos + 4])
            pos += 4
            key = bytes(buf[pos: pos + klen])
            pos += klen
            (vlen,) = _U32.unpack(buf[pos: pos + 4])
            pos += 4
            if vlen == TOMBSTONE_LEN:
                yield key, TOMBSTONE
            else:
                yield key, bytes(buf[pos: pos + vlen])
                pos += vlen

    def get(self, key: bytes) -> Optional[Value]:
        """Value bytes, TOMBSTONE, or None when the key is not in this segment."""
        for k, v in self._records_from(self._seek_offset(key)):
            if k == key:
                return v
            if k > key:
                return None
        return None

    def scan(self, prefix: bytes = b"") -> Iterator[Tuple[bytes, Value]]:
        """All records (tombstones included) with the prefix, key-ascending."""
        upper = prefix_upper_bound(prefix)
        start = self._seek_offset(prefix) if prefix else 6
        for key, value in self._records_from(start):
            if key < prefix:
                continue
            if upper is not None and key >= upper:
                return
            yield key, value

    def has_tombstones(self) -> bool:
        if self._tombstone_count is None:
            self._tombstone_count = sum(1 for _, v in self.scan() if v is TOMBSTONE)
        return self._tombstone_count > 0

    def note_tombstones(self, count: int) -> None:
        """Record the tombstone count known from writing this segment."""
        self._tombstone_count = count

    def close(self) -> None:
        try:
            self._mm.close()
        finally:
            self._file.close()
