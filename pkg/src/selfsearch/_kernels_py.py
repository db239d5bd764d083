"""Pure-Python implementations of the hot kernels.

Every function here has a compiled twin in ``selfsearch._kernels`` (Cython).
The two must be behavior-identical; tests run the same vectors against both.
"""

from collections import Counter
from typing import Dict, Iterable, List, Tuple

BACKEND_NAME = "python"

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes, h: int = FNV64_OFFSET) -> int:
    """64-bit FNV-1a over ``data``, continuing from hash state ``h``."""
    for b in data:
        h = ((h ^ b) * FNV64_PRIME) & _MASK64
    return h


def count_tokens(tokens: Iterable[str]) -> Dict[str, int]:
    """Term-frequency map of a token stream."""
    return dict(Counter(tokens))


def decode_postings(entries: List[Tuple[bytes, bytes]], prefix_len: int) -> List[Tuple[int, int]]:
    """Turn raw (key, value) postings-store pairs into (docid, tf) pairs.

    ``prefix_len`` is the length of the term+separator prefix shared by all
    keys; the remaining 10 bytes are the zero-padded decimal docid, and the
    value is the decimal term frequency.
    """
    return [(int(key[prefix_len:]), int(value)) for key, value in entries]


def accumulate_postings(
    acc: Dict[int, float],
    postings: List[Tuple[int, int]],
    weight: float,
    insert: bool,
) -> None:
    """Add ``tf * weight`` to the accumulator for each posting.

    With ``insert`` new docids are admitted; without it only docids already
    present are updated (the first-term-required evaluation rule).
    """
    if insert:
        for docid, tf in postings:
            acc[docid] = acc.get(docid, 0.0) + tf * weight
    else:
        for docid, tf in postings:
            if docid in acc:
                acc[docid] += tf * weight
