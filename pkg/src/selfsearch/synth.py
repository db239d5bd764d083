"""Deterministic synthetic corpora and query sets.

Documents are short tweet-like token runs drawn from a pseudo-word
vocabulary under a Zipf-shaped distribution, so postings lists have the
skewed df profile real microblog text shows. Everything is a pure
function of its parameters; the same seed always yields the same bytes.
"""

import random
from itertools import accumulate
from typing import List, Tuple

from selfsearch.indexing import Document

_SYLLABLES = [
    c + v
    for c in "bdfgklmnprstvz"
    for v in ("a", "e", "i", "o", "u")
]

_ZIPF_EXPONENT = 1.07


def make_vocabulary(size: int, seed: int = 42) -> List[str]:
    rng = random.Random(seed)
    words: List[str] = []
    seen = set()
    while len(words) < size:
        word = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 4)))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _zipf_cum_weights(size: int) -> List[float]:
    return list(accumulate(1.0 / (rank ** _ZIPF_EXPONENT) for rank in range(1, size + 1)))


def synth_corpus(
    n_docs: int,
    vocab_size: int = 2000,
    seed: int = 42,
    min_tokens: int = 5,
    max_tokens: int = 20,
    tweet_flavor: bool = False,
) -> List[Document]:
    """Tweet-like documents with Zipf-distributed terms.

    tweet_flavor sprinkles hashtags, mentions, and year numbers in, at
    the cost of growing the vocabulary beyond vocab_size.
    """
    vocab = make_vocabulary(vocab_size, seed)
    cum = _zipf_cum_weights(vocab_size)
    rng = random.Random(seed * 2654435761 % (2 ** 31))
    docs: List[Document] = []
    for i in range(n_docs):
        length = rng.randint(min_tokens, max_tokens)
        tokens = rng.choices(vocab, cum_weights=cum, k=length)
        if tweet_flavor:
            roll = rng.random()
            if roll < 0.25:
                tokens[rng.randrange(length)] = "#" + rng.choice(vocab)
            elif roll < 0.40:
                tokens[rng.randrange(length)] = "@" + rng.choice(vocab)
            elif roll < 0.50:
                tokens[rng.randrange(length)] = str(rng.randint(1998, 2026))
        docs.append(Document(external_id=f"t{i:08d}", text=" ".join(tokens)))
    return docs


def synth_queries(
    n: int,
    vocab_size: int = 2000,
    seed: int = 42,
    min_terms: int = 1,
    max_terms: int = 4,
) -> List[Tuple[str, str]]:
    """Query set over the same vocabulary, lengths biased toward 2-3 terms."""
    vocab = make_vocabulary(vocab_size, seed)
    cum = _zipf_cum_weights(vocab_size)
    rng = random.Random(seed + 7)
    lengths = list(range(min_terms, max_terms + 1))
    length_weights = [1.0 + min(idx, 2) for idx in range(len(lengths))]
    queries: List[Tuple[str, str]] = []
    for i in range(n):
        length = rng.choices(lengths, weights=length_weights, k=1)[0]
        terms = rng.choices(vocab, cum_weights=cum, k=length)
        queries.append((f"q{i + 1:03d}", " ".join(terms)))
    return queries
