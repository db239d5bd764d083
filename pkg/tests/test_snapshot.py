"""Snapshot container: round trips, golden layout, corruption detection."""

import struct

import pytest

from selfsearch.errors import CorruptionError
from selfsearch.indexing import IndexWriter
from selfsearch.kernels import fnv1a64
from selfsearch.query import Searcher
from selfsearch.snapshot import export_snapshot, import_snapshot, parse_snapshot
from selfsearch.storage import StorageConfig, open_storage
from conftest import TOY_DOCS


def memory_storage():
    return open_storage(StorageConfig(backend="memory"))


def test_empty_storage_golden_bytes():
    data = export_snapshot(memory_storage())
    body = b"SNAP1"
    for sid in range(4):
        body += bytes([sid]) + struct.pack("<I", 0)
    assert data == body + struct.pack("<Q", fnv1a64(body))


def test_round_trip_preserves_query_results(toy_index):
    data = export_snapshot(toy_index)
    restored = memory_storage()
    import_snapshot(restored, data)
    original = Searcher(toy_index).search("a c", 10)
    recovered = Searcher(restored).search("a c", 10)
    assert [(r.external_id, r.score) for r in original.results] == [
        (r.external_id, r.score) for r in recovered.results
    ]
    # and the re-export reproduces the same bytes
    assert export_snapshot(restored) == data


def test_round_trip_empty():
    data = export_snapshot(memory_storage())
    restored = memory_storage()
    assert import_snapshot(restored, data) == 0


def test_parse_reports_entry_counts(toy_index):
    stores = dict(parse_snapshot(export_snapshot(toy_index)))
    assert len(stores["postings"]) == 5
    assert len(stores["df"]) == 3
    assert len(stores["docs"]) == 3
    assert len(stores["meta"]) == 3  # stats, tokenizer, ready


def test_checksum_flip_detected(toy_index):
    data = bytearray(export_snapshot(toy_index))
    data[10] ^= 0xFF
    with pytest.raises(CorruptionError):
        parse_snapshot(bytes(data))


def test_truncation_detected(toy_index):
    data = export_snapshot(toy_index)
    with pytest.raises(CorruptionError):
        parse_snapshot(data[: len(data) // 2])


def test_bad_magic_detected():
    with pytest.raises(CorruptionError):
        parse_snapshot(b"NOPE1" + b"\x00" * 16)


def test_store_order_enforced():
    data = bytearray(export_snapshot(memory_storage()))
    # swap the ids of the first two (empty) store sections, re-checksum
    body = data[:-8]
    body[5], body[10] = body[10], body[5]
    forged = bytes(body) + struct.pack("<Q", fnv1a64(bytes(body)))
    with pytest.raises(CorruptionError):
        parse_snapshot(forged)
