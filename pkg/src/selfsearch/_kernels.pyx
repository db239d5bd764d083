# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the hot kernels in selfsearch._kernels_py."""

from libc.stdint cimport uint64_t

BACKEND_NAME = "cython"

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3

cdef uint64_t _FNV64_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t _FNV64_PRIME = 0x100000001B3ULL


def fnv1a64(data, h=None):
    """64-bit FNV-1a over ``data``, continuing from hash state ``h``."""
    cdef const unsigned char[::1] buf = data
    cdef uint64_t state = _FNV64_OFFSET if h is None else <uint64_t> h
    cdef Py_ssize_t i, n = buf.shape[0]
    for i in range(n):
        state = (state ^ buf[i]) * _FNV64_PRIME
    return state


def count_tokens(tokens):
    """Term-frequency map of a token stream."""
    cdef dict out = {}
    for tok in tokens:
        if tok in out:
            out[tok] += 1
        else:
            out[tok] = 1
    return out


def decode_postings(list entries, Py_ssize_t prefix_len):
    """Turn raw (key, value) postings-store pairs into (docid, tf) pairs."""
    cdef list out = []
    cdef bytes key, value
    for key, value in entries:
        out.append((int(key[prefix_len:]), int(value)))
    return out


def accumulate_postings(dict acc, list postings, double weight, bint insert):
    """Add ``tf * weight`` to the accumulator for each posting."""
    cdef long docid, tf
    cdef object cur
    if insert:
        for docid, tf in postings:
            cur = acc.get(docid)
            if cur is None:
                acc[docid] = tf * weight
            else:
                acc[docid] = <double> cur + tf * weight
    else:
        for docid, tf in postings:
            cur = acc.get(docid)
            if cur is not None:
                acc[docid] = <double> cur + tf * weight
