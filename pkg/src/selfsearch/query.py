"""Query evaluation over the inverted index.

Scoring is tf-idf with raw term frequency and idf = ln(1 + N/df). A
document matches only if it contains the first query term: the
accumulator is seeded from the first term's postings and later terms
update existing entries without inserting new ones.
"""

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from selfsearch.errors import ValidationError
from selfsearch.indexing import (
    CollectionStats,
    Tokenizer,
    collection_stats,
    decode_doc_value,
    encode_doc_key,
    stored_tokenizer_options,
    term_prefix,
)
from selfsearch.kernels import accumulate_postings, decode_postings
from selfsearch.storage import Storage


@dataclass
class SearchResult:
    rank: int
    docid: int
    external_id: str
    score: float


@dataclass
class SearchResponse:
    results: List[SearchResult] = field(default_factory=list)
    latency_ms: float = 0.0
    terms_used: int = 0
    terms_skipped: int = 0


class Searcher:
    """Evaluates queries against a finalized index."""

    def __init__(self, storage: Storage):
        self.storage = storage
        self.stats: CollectionStats = collection_stats(storage)
        self.tokenizer = Tokenizer(stored_tokenizer_options(storage))

    def lookup_df(self, term: str) -> int:
        raw = self.storage.get("df", term.encode("utf-8"))
        return 0 if raw is None else int(raw)

    def idf(self, df: int) -> float:
        return math.log(1.0 + self.stats.doc_count / df)

    def postings(self, term: str) -> List[Tuple[int, int]]:
        """One term's postings list as (docid, tf), docid-ascending."""
        prefix = term_prefix(term)
        entries = list(self.storage.range_scan("postings", prefix=prefix))
        return decode_postings(entries, len(prefix))

    def evaluate(self, terms: List[str], k: int) -> Tuple[List[Tuple[int, float]], int]:
        """Rank documents for a tokenized query.

        Returns (ranked (docid, score) pairs, number of terms skipped
        for having df = 0). Ties break toward the smaller docid.
        """
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        if not terms:
            return [], 0
        dfs = [(term, self.lookup_df(term)) for term in terms]
        usable = [(term, df) for term, df in dfs if df > 0]
        skipped = len(terms) - len(usable)
        if dfs[0][1] == 0:
            return [], skipped

        acc: Dict[int, float] = {}
        first_term, first_df = usable[0]
        accumulate_postings(acc, self.postings(first_term), self.idf(first_df), True)
        for term, df in usable[1:]:
            accumulate_postings(acc, self.postings(term), self.idf(df), False)

        top = heapq.nsmallest(k, acc.items(), key=lambda item: (-item[1], item[0]))
        return top, skipped

    def search(self, text: str, k: int = 10) -> SearchResponse:
        """Tokenize with the index's own options, evaluate, time it."""
        terms = self.tokenizer.tokenize(text)
        start = time.perf_counter()
        ranked, skipped = self.evaluate(terms, k)
        latency_ms = (time.perf_counter() - start) * 1000.0
        results = []
        for rank, (docid, score) in enumerate(ranked, 1):
            raw = self.storage.get("docs", encode_doc_key(docid))
            external_id = decode_doc_value(raw).external_id if raw is not None else str(docid)
            results.append(SearchResult(rank=rank, docid=docid, external_id=external_id, score=score))
        return SearchResponse(
            results=results,
            latency_ms=latency_ms,
            terms_used=len(terms) - skipped,
            terms_skipped=skipped,
        )


def format_run_lines(qid: str, response: SearchResponse, tag: str = "selfsearch") -> List[str]:
    """Standard 6-column run format: qid Q0 external_id rank score tag."""
    return [
        f"{qid} Q0 {r.external_id} {r.rank} {r.score:.6f} {tag}"
        for r in response.results
    ]


def oracle_tokenize_corpus(
    storage: Storage,
) -> Tuple[List[Tuple[int, Dict[str, int]]], Dict[str, int]]:
    """Per-document tf maps and df counts straight from stored raw text."""
    tokenizer = Tokenizer(stored_tokenizer_options(storage))
    doc_tfs: List[Tuple[int, Dict[str, int]]] = []
    df: Dict[str, int] = {}
    for key, value in storage.range_scan("docs"):
        tokens = tokenizer.tokenize(decode_doc_value(value).text)
        tf: Dict[str, int] = {}
        for token in tokens:
            tf[token] = tf.get(token, 0) + 1
        doc_tfs.append((int(key), tf))
        for term in tf:
            df[term] = df.get(term, 0) + 1
    return doc_tfs, df


def oracle_rank(
    doc_tfs: List[Tuple[int, Dict[str, int]]],
    df: Dict[str, int],
    n: int,
    terms: List[str],
    k: int,
) -> List[Tuple[int, float]]:
    """Ranks pre-tokenized documents by the same scoring contract.

    Linear scan over every document; no index structures involved. The
    contribution order matches evaluate(), so scores agree bit for bit.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if not terms:
        return []
    usable = [term for term in terms if df.get(term, 0) > 0]
    if not usable or df.get(terms[0], 0) == 0:
        return []
    scored: List[Tuple[int, float]] = []
    first_term = usable[0]
    for docid, tf in doc_tfs:
        if first_term not in tf:
            continue
        score = tf[first_term] * math.log(1.0 + n / df[first_term])
        for term in usable[1:]:
            if term in tf:
                score += tf[term] * math.log(1.0 + n / df[term])
        scored.append((docid, score))
    return heapq.nsmallest(k, scored, key=lambda item: (-item[1], item[0]))


def oracle_evaluate(storage: Storage, terms: List[str], k: int) -> List[Tuple[int, float]]:
    """Reference ranking by brute force over the whole docs store.

    Recomputes term frequencies and document frequencies from document
    text alone, touching neither the postings nor the df store. Slow and
    only for verifying the indexed path.
    """
    doc_tfs, df = oracle_tokenize_corpus(storage)
    return oracle_rank(doc_tfs, df, len(doc_tfs), terms, k)
