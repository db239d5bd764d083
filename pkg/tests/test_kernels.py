"""Both kernel implementations against reference behavior and each other."""

from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

import selfsearch._kernels_py as pure

IMPLS = [pure]
try:
    from selfsearch import _kernels as compiled

    IMPLS.append(compiled)
except ImportError:
    compiled = None


@pytest.fixture(params=IMPLS, ids=lambda mod: mod.BACKEND_NAME)
def kernels(request):
    return request.param


# Published FNV-1a 64-bit test vectors.
FNV_VECTORS = [
    (b"", 0xCBF29CE484222325),
    (b"a", 0xAF63DC4C8601EC8C),
    (b"b", 0xAF63DF4C8601F1A5),
    (b"foobar", 0x85944171F73967E8),
]


@pytest.mark.parametrize("data,expected", FNV_VECTORS)
def test_fnv1a64_vectors(kernels, data, expected):
    assert kernels.fnv1a64(data) == expected


def test_fnv1a64_is_chainable(kernels):
    whole = kernels.fnv1a64(b"hello world")
    split = kernels.fnv1a64(b" world", kernels.fnv1a64(b"hello"))
    assert split == whole


@given(st.binary(max_size=256))
def test_fnv1a64_matches_reference(data):
    h = 0xCBF29CE484222325
    for byte in data:
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    for impl in IMPLS:
        assert impl.fnv1a64(data) == h


def test_count_tokens_counts_duplicates(kernels):
    assert kernels.count_tokens(["a", "b", "a"]) == {"a": 2, "b": 1}
    assert kernels.count_tokens([]) == {}


@given(st.lists(st.text(min_size=1, max_size=8), max_size=50))
def test_count_tokens_matches_counter(tokens):
    for impl in IMPLS:
        assert impl.count_tokens(tokens) == dict(Counter(tokens))


def test_decode_postings_strips_prefix(kernels):
    entries = [
        (b"a\x1f0000000000", b"2"),
        (b"a\x1f0000000007", b"13"),
    ]
    assert kernels.decode_postings(entries, 2) == [(0, 2), (7, 13)]


def test_accumulate_insert_and_update(kernels):
    acc = {}
    kernels.accumulate_postings(acc, [(0, 2), (1, 1)], 0.5, True)
    assert acc == {0: 1.0, 1: 0.5}
    # update mode must never add docid 2
    kernels.accumulate_postings(acc, [(1, 4), (2, 9)], 0.25, False)
    assert acc == {0: 1.0, 1: 1.5}


@given(
    st.lists(st.tuples(st.integers(0, 30), st.integers(1, 100)), max_size=30),
    st.lists(st.tuples(st.integers(0, 30), st.integers(1, 100)), max_size=30),
    st.floats(0.01, 10.0),
    st.floats(0.01, 10.0),
)
def test_accumulate_matches_reference(first, second, w1, w2):
    # dedupe docids within each postings list, keep them sorted
    first = sorted(dict(first).items())
    second = sorted(dict(second).items())
    expected = {}
    for docid, tf in first:
        expected[docid] = expected.get(docid, 0.0) + tf * w1
    for docid, tf in second:
        if docid in expected:
            expected[docid] += tf * w2
    for impl in IMPLS:
        acc = {}
        impl.accumulate_postings(acc, first, w1, True)
        impl.accumulate_postings(acc, second, w2, False)
        assert acc == expected


@pytest.mark.skipif(compiled is None, reason="compiled kernels unavailable")
@given(st.binary(max_size=512))
def test_backends_agree_on_fnv(data):
    assert pure.fnv1a64(data) == compiled.fnv1a64(data)
