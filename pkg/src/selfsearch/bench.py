"""Benchmark harness: indexing throughput, query latency, df sweep.

All timing is wall-clock around evaluate() or build() only; file parsing
and tokenization of the query text happen outside the timed region.
Times are reported in milliseconds with 3 decimal places.
"""

import random
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from selfsearch.errors import ValidationError
from selfsearch.indexing import Document, IndexWriter, TokenizerOptions
from selfsearch.query import Searcher
from selfsearch.storage import Storage


def percentile(values: Sequence[float], p: float) -> float:
    """Nearest-rank percentile: sorted value at index ceil(p/100 * n) - 1."""
    if not values:
        raise ValidationError("percentile of an empty list")
    if not 0 < p <= 100:
        raise ValidationError(f"p must be in (0, 100], got {p}")
    ordered = sorted(values)
    rank = -(-len(ordered) * p // 100)  # ceil without float error
    return ordered[int(rank) - 1]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation; 0.0 when either side has no variance."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValidationError("pearson needs two equal-length series of >= 2 points")
    try:
        return statistics.correlation(list(xs), list(ys))
    except statistics.StatisticsError:
        return 0.0


@dataclass
class LatencyStats:
    mean_ms: float
    median_ms: float
    p90_ms: float
    max_ms: float
    trials: int
    n_queries: int

    @classmethod
    def from_latencies(cls, latencies: Sequence[float], trials: int) -> "LatencyStats":
        if not latencies:
            raise ValidationError("no latencies to aggregate")
        return cls(
            mean_ms=sum(latencies) / len(latencies),
            median_ms=percentile(latencies, 50),
            p90_ms=percentile(latencies, 90),
            max_ms=max(latencies),
            trials=trials,
            n_queries=len(latencies),
        )


@dataclass
class ThroughputReport:
    docs: int
    postings: int
    wall_seconds: float
    postings_per_sec: float
    docs_per_sec: float

    @classmethod
    def from_run(cls, docs: int, postings: int, wall_seconds: float) -> "ThroughputReport":
        if wall_seconds <= 0:
            raise ValidationError("wall_seconds must be > 0")
        return cls(
            docs=docs,
            postings=postings,
            wall_seconds=wall_seconds,
            postings_per_sec=postings / wall_seconds,
            docs_per_sec=docs / wall_seconds,
        )


@dataclass
class IndexBenchReport:
    per_trial: List[ThroughputReport]
    mean: ThroughputReport


@dataclass
class QueryLatencyRow:
    qid: str
    latency_ms: float


@dataclass
class QueryBenchReport:
    rows: List[QueryLatencyRow]
    stats: LatencyStats
    warmup: int


@dataclass
class DfSweepRow:
    term: str
    df: int
    latency_ms: float


@dataclass
class DfSweepReport:
    rows: List[DfSweepRow]
    pearson_r: float
    repeats: int
    seed: int


def measure_indexing(
    docs: Sequence[Document],
    storage_factory: Callable[[], Storage],
    trials: int = 1,
    options: Optional[TokenizerOptions] = None,
    batch_size: int = 1000,
) -> IndexBenchReport:
    """Times full index builds, one fresh storage per trial."""
    if not docs:
        raise ValidationError("corpus is empty")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    per_trial: List[ThroughputReport] = []
    for _ in range(trials):
        storage = storage_factory()
        try:
            writer = IndexWriter(storage, options=options, batch_size=batch_size)
            start = time.perf_counter()
            stats = writer.build(docs)
            wall = time.perf_counter() - start
        finally:
            storage.close()
        per_trial.append(ThroughputReport.from_run(stats.doc_count, stats.total_postings, wall))
    mean_wall = sum(r.wall_seconds for r in per_trial) / len(per_trial)
    mean = ThroughputReport.from_run(per_trial[0].docs, per_trial[0].postings, mean_wall)
    return IndexBenchReport(per_trial=per_trial, mean=mean)


def measure_queries(
    searcher: Searcher,
    queries: Sequence[Tuple[str, str]],
    trials: int = 3,
    warmup: int = 1,
    k: int = 10,
) -> QueryBenchReport:
    """Per-query latency, mean across trials, after untimed warmup passes."""
    if not queries:
        raise ValidationError("query set is empty")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if warmup < 0:
        raise ValidationError("warmup must be >= 0")
    tokenized = [(qid, searcher.tokenizer.tokenize(text)) for qid, text in queries]
    for _ in range(warmup):
        for _qid, terms in tokenized:
            searcher.evaluate(terms, k)
    sums = [0.0] * len(tokenized)
    for _ in range(trials):
        for i, (_qid, terms) in enumerate(tokenized):
            start = time.perf_counter()
            searcher.evaluate(terms, k)
            sums[i] += (time.perf_counter() - start) * 1000.0
    rows = [
        QueryLatencyRow(qid=qid, latency_ms=total / trials)
        for (qid, _terms), total in zip(tokenized, sums)
    ]
    stats = LatencyStats.from_latencies([row.latency_ms for row in rows], trials)
    return QueryBenchReport(rows=rows, stats=stats, warmup=warmup)


def df_sweep(
    searcher: Searcher,
    samples: int = 200,
    max_df: int = 1000,
    repeats: int = 5,
    seed: int = 42,
) -> DfSweepReport:
    """Latency of single-term queries over a df-stratified term sample.

    Samples distinct terms with 1 <= df <= max_df uniformly (seeded),
    times each as a single-term query with k = max_df so the whole
    postings list flows into the result, and keeps the median of the
    repeats. Rows come back df-ascending.
    """
    if samples < 2:
        raise ValidationError("samples must be >= 2")
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    candidates = [
        (key.decode("utf-8"), int(value))
        for key, value in searcher.storage.range_scan("df")
        if 1 <= int(value) <= max_df
    ]
    if len(candidates) < samples:
        raise ValidationError(
            f"need {samples} terms with 1 <= df <= {max_df}, "
            f"index has only {len(candidates)}"
        )
    rng = random.Random(seed)
    chosen = rng.sample(candidates, samples)
    k = max(max_df, 1)
    rows: List[DfSweepRow] = []
    for term, df in chosen:
        timings = []
        for _ in range(repeats):
            start = time.perf_counter()
            searcher.evaluate([term], k)
            timings.append((time.perf_counter() - start) * 1000.0)
        rows.append(DfSweepRow(term=term, df=df, latency_ms=percentile(timings, 50)))
    rows.sort(key=lambda row: (row.df, row.term))
    r = pearson([row.df for row in rows], [row.latency_ms for row in rows])
    return DfSweepReport(rows=rows, pearson_r=r, repeats=repeats, seed=seed)


def read_query_file(path: str) -> List[Tuple[str, str]]:
    """Query file: `qid<TAB>query text` lines, `#` comments allowed."""
    queries: List[Tuple[str, str]] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            qid, sep, text = line.partition("\t")
            if not sep or not qid.strip():
                raise ValidationError(f"{path}:{lineno}: expected 'qid<TAB>query text'")
            queries.append((qid.strip(), text))
    return queries


def write_query_csv(path: str, report: QueryBenchReport) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("qid,latency_ms\n")
        for row in report.rows:
            f.write(f"{row.qid},{row.latency_ms:.3f}\n")


def write_sweep_csv(path: str, report: DfSweepReport) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("term,df,latency_ms\n")
        for row in report.rows:
            f.write(f"{row.term},{row.df},{row.latency_ms:.3f}\n")


def write_throughput_csv(path: str, report: IndexBenchReport) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("docs,postings,wall_seconds,postings_per_sec\n")
        for row in report.per_trial:
            f.write(
                f"{row.docs},{row.postings},{row.wall_seconds:.6f},{row.postings_per_sec:.3f}\n"
            )


def format_latency_summary(stats: LatencyStats, label: str = "selfsearch") -> str:
    """Aggregate table, columns mean / median / P90 / max."""
    lines = [
        f"queries={stats.n_queries} trials={stats.trials}",
        "system     mean median    p90    max",
        f"{label:<10} {stats.mean_ms:>6.0f} {stats.median_ms:>6.0f} "
        f"{stats.p90_ms:>6.0f} {stats.max_ms:>6.0f}",
        "mean,median,p90,max",
        f"{stats.mean_ms:.3f},{stats.median_ms:.3f},{stats.p90_ms:.3f},{stats.max_ms:.3f}",
    ]
    return "\n".join(lines)
