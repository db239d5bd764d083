"""Write-ahead journal for the LSM backend.

Record layout, one per put/delete:

    store_id u8 | op u8 (0=put, 1=del) | key_len u32-LE | key
    | val_len u32-LE | value | checksum u64-LE

The checksum is 64-bit FNV-1a over the record bytes that precede it.
Appends are flushed to the OS after every call, so acknowledged writes
survive a process kill; fsync happens at flush() time, not here.
"""

import os
import struct
from typing import Iterator, List, Tuple

from selfsearch.errors import CorruptionError, StorageError
from selfsearch.kernels import fnv1a64

OP_PUT = 0
OP_DEL = 1

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_HDR = struct.Struct("<BBI")


def encode_record(store_id: int, op: int, key: bytes, value: bytes) -> bytes:
    body = _HDR.pack(store_id, op, len(key)) + key + _U32.pack(len(value)) + value
    return body + _U64.pack(fnv1a64(body))


class Journal:
    def __init__(self, path: str):
        self.path = path
        try:
            self._f = open(path, "ab")
        except OSError as exc:
            raise StorageError(f"cannot open journal {path}: {exc}") from exc

    def append(self, records: List[Tuple[int, int, bytes, bytes]]) -> None:
        """Append records as one OS write so a batch lands together."""
        blob = b"".join(encode_record(*rec) for rec in records)
        try:
            self._f.write(blob)
            self._f.flush()
        except OSError as exc:
            raise StorageError(f"journal append failed: {exc}") from exc

    def truncate(self, sync: bool) -> None:
        try:
            self._f.truncate(0)
            self._f.seek(0)
            if sync:
                os.fsync(self._f.fileno())
        except OSError as exc:
            raise StorageError(f"journal truncate failed: {exc}") from exc

    def sync(self) -> None:
        self._f.flush()
        os.fsync(self._f.fileno())

    def close(self) -> None:
        self._f.close()


def replay(path: str) -> Iterator[Tuple[int, int, bytes, bytes]]:
    """Yield journal records; a torn tail is truncated away, a checksum
    mismatch on a complete record raises CorruptionError."""
    if not os.path.exists(path):
        return
    with open(path, "rb") as f:
        data = f.read()
    pos = 0
    good = 0
    size = len(data)
    while pos < size:
        if pos + _HDR.size > size:
            break  # torn header
        store_id, op, klen = _HDR.unpack_from(data, pos)
        body_len = _HDR.size + klen + 4
        if pos + body_len > size:
            break
        (vlen,) = _U32.unpack_from(data, pos + _HDR.size + klen)
        rec_len = body_len + vlen + 8
        if pos + rec_len > size:
            break  # torn value or checksum
        body_end = pos + body_len + vlen
        (stored,) = _U64.unpack_from(data, body_end)
        if fnv1a64(data[pos:body_end]) != stored:
            raise CorruptionError(f"journal checksum mismatch: {path}", path)
        key = data[pos + _HDR.size: pos + _HDR.size + klen]
        value = data[pos + body_len: body_end]
        yield store_id, op, key, value
        pos += rec_len
        good = pos
    if good != size:
        with open(path, "r+b") as f:
            f.truncate(good)
