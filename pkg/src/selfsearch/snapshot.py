"""Whole-index snapshot container.

Layout: magic `SNAP1`, then for each store in id order (postings, df,
docs, meta): store_id u8, entry count u32-LE, then per entry key_len
u32-LE, key bytes, val_len u32-LE, value bytes; finally a 64-bit FNV-1a
checksum (little-endian) over all preceding bytes. The same byte layout
is produced and consumed by the browser demo, so exports are comparable
bit for bit across implementations.
"""

import struct
from typing import List, Tuple

from selfsearch.errors import CorruptionError
from selfsearch.kernels import fnv1a64
from selfsearch.storage import STORES, Storage

MAGIC = b"SNAP1"
_BATCH = 1000


def export_snapshot(storage: Storage) -> bytes:
    buf = bytearray(MAGIC)
    for sid, name in enumerate(STORES):
        entries = list(storage.range_scan(name))
        buf.append(sid)
        buf += struct.pack("<I", len(entries))
        for key, value in entries:
            buf += struct.pack("<I", len(key))
            buf += key
            buf += struct.pack("<I", len(value))
            buf += value
    buf += struct.pack("<Q", fnv1a64(bytes(buf)))
    return bytes(buf)


def write_snapshot(storage: Storage, path: str) -> int:
    data = export_snapshot(storage)
    with open(path, "wb") as f:
        f.write(data)
    return len(data)


def parse_snapshot(data: bytes) -> List[Tuple[str, List[Tuple[bytes, bytes]]]]:
    """Validates and decodes a snapshot into per-store entry lists."""
    if len(data) < len(MAGIC) + 8 or data[: len(MAGIC)] != MAGIC:
        raise CorruptionError("not a snapshot container")
    expected = struct.unpack("<Q", data[-8:])[0]
    if fnv1a64(data[:-8]) != expected:
        raise CorruptionError("snapshot checksum mismatch")
    body = memoryview(data)[len(MAGIC): -8]
    pos = 0

    def take(n: int) -> memoryview:
        nonlocal pos
        if pos + n > len(body):
            raise CorruptionError("snapshot truncated")
        chunk = body[pos: pos + n]
        pos += n
        return chunk

    stores: List[Tuple[str, List[Tuple[bytes, bytes]]]] = []
    for sid, name in enumerate(STORES):
        if take(1)[0] != sid:
            raise CorruptionError(f"snapshot store order broken at {name}")
        (count,) = struct.unpack("<I", take(4))
        entries: List[Tuple[bytes, bytes]] = []
        for _ in range(count):
            (key_len,) = struct.unpack("<I", take(4))
            key = bytes(take(key_len))
            (val_len,) = struct.unpack("<I", take(4))
            value = bytes(take(val_len))
            entries.append((key, value))
        stores.append((name, entries))
    if pos != len(body):
        raise CorruptionError("snapshot has trailing bytes")
    return stores


def import_snapshot(storage: Storage, data: bytes) -> int:
    """Loads a snapshot's entries into storage (expected to be fresh).

    Returns the number of entries written. Existing keys are overwritten;
    keys absent from the snapshot are left alone, so import into a
    non-empty store is undefined in general.
    """
    total = 0
    for name, entries in parse_snapshot(data):
        for start in range(0, len(entries), _BATCH):
            storage.batch_put(name, entries[start: start + _BATCH])
        total += len(entries)
    storage.flush()
    return total


def read_snapshot_file(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()
