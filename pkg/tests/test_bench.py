"""Percentiles, latency aggregation, throughput identity, df sweep."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfsearch import bench
from selfsearch.errors import ValidationError
from selfsearch.indexing import Document, IndexWriter
from selfsearch.query import Searcher
from selfsearch.storage import StorageConfig, open_storage
from conftest import TOY_DOCS


# -- percentile ------------------------------------------------------------------


def test_percentile_examples():
    assert bench.percentile(list(range(1, 11)), 90) == 9
    assert bench.percentile([5], 1) == 5
    assert bench.percentile([5], 100) == 5
    assert bench.percentile([3, 1, 2], 50) == 2


def test_percentile_validation():
    with pytest.raises(ValidationError):
        bench.percentile([], 50)
    with pytest.raises(ValidationError):
        bench.percentile([1], 0)
    with pytest.raises(ValidationError):
        bench.percentile([1], 101)


def exact_nearest_rank(values, p):
    # Fraction sidesteps float round-off in ceil(p/100 * n)
    ordered = sorted(values)
    index = math.ceil(Fraction(p, 100) * len(ordered)) - 1
    return ordered[index]


@given(
    st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=200),
    st.integers(1, 100),
)
def test_percentile_matches_reference(values, p):
    assert bench.percentile(values, p) == exact_nearest_rank(values, p)


def test_percentile_many_random_lists():
    rng = random.Random(42)
    for _ in range(1000):
        values = [rng.uniform(0, 1000) for _ in range(rng.randint(1, 60))]
        p = rng.randint(1, 100)
        assert bench.percentile(values, p) == exact_nearest_rank(values, p)


# -- latency stats ----------------------------------------------------------------


def test_latency_stats_example():
    stats = bench.LatencyStats.from_latencies([100, 200, 300], trials=3)
    assert (stats.mean_ms, stats.median_ms, stats.p90_ms, stats.max_ms) == (200, 200, 300, 300)
    assert stats.n_queries == 3


@given(st.lists(st.floats(0, 1e4, allow_nan=False), min_size=1, max_size=100))
def test_latency_stats_invariants(latencies):
    stats = bench.LatencyStats.from_latencies(latencies, trials=1)
    assert stats.median_ms <= stats.p90_ms <= stats.max_ms
    assert stats.mean_ms <= stats.max_ms + 1e-9
    assert min(latencies) <= stats.mean_ms + 1e-9


def test_latency_stats_permutation_invariant():
    values = [5.0, 1.0, 9.0, 3.0, 3.0, 7.5]
    rng = random.Random(1)
    base = bench.LatencyStats.from_latencies(values, 1)
    for _ in range(10):
        rng.shuffle(values)
        assert bench.LatencyStats.from_latencies(values, 1) == base


# -- pearson ----------------------------------------------------------------------


def test_pearson_perfect_linearity():
    assert bench.pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)


def test_pearson_zero_variance_guard():
    assert bench.pearson([1, 1, 1], [1, 2, 3]) == 0.0


# -- measure_indexing ---------------------------------------------------------------


def memory_factory():
    return open_storage(StorageConfig(backend="memory"))


def test_measure_indexing_toy_postings_count():
    report = bench.measure_indexing(list(TOY_DOCS), memory_factory, trials=2)
    assert len(report.per_trial) == 2
    for row in report.per_trial + [report.mean]:
        assert row.docs == 3
        assert row.postings == 5
        assert row.postings_per_sec * row.wall_seconds == pytest.approx(
            row.postings, rel=1e-6
        )
        assert row.docs_per_sec * row.wall_seconds == pytest.approx(row.docs, rel=1e-6)


def test_measure_indexing_rejects_empty_corpus():
    with pytest.raises(ValidationError):
        bench.measure_indexing([], memory_factory)


# -- measure_queries ----------------------------------------------------------------


class CountingSearcher:
    """Wraps a Searcher, counting evaluate calls."""

    def __init__(self, searcher):
        self.inner = searcher
        self.tokenizer = searcher.tokenizer
        self.calls = 0

    def evaluate(self, terms, k):
        self.calls += 1
        return self.inner.evaluate(terms, k)


def toy_searcher():
    storage = open_storage(StorageConfig(backend="memory"))
    IndexWriter(storage).build(list(TOY_DOCS))
    return Searcher(storage)


def test_measure_queries_call_accounting():
    counting = CountingSearcher(toy_searcher())
    queries = [("q1", "a"), ("q2", "a c"), ("q3", "zzz")]
    report = bench.measure_queries(counting, queries, trials=3, warmup=1)
    assert counting.calls == 4 * len(queries)
    assert [row.qid for row in report.rows] == ["q1", "q2", "q3"]
    assert report.stats.n_queries == 3
    assert report.stats.trials == 3


def test_measure_queries_rejects_empty_set():
    with pytest.raises(ValidationError):
        bench.measure_queries(toy_searcher(), [], trials=1)


# -- df sweep ----------------------------------------------------------------------


def staircase_index():
    # term i appears in exactly 10*i documents
    docs = []
    for j in range(100):
        terms = ["t%02d" % i for i in range(1, 11) if j < 10 * i]
        docs.append(Document("d%03d" % j, " ".join(terms)))
    storage = open_storage(StorageConfig(backend="memory"))
    IndexWriter(storage).build(docs)
    return Searcher(storage)


def test_df_sweep_rows_as_constructed():
    searcher = staircase_index()
    report = bench.df_sweep(searcher, samples=10, max_df=100, repeats=2, seed=42)
    assert [row.df for row in report.rows] == [10 * i for i in range(1, 11)]
    # measured result set size equals df when k >= max_df
    for row in report.rows:
        ranked, _ = searcher.evaluate([row.term], 100)
        assert len(ranked) == row.df


def test_df_sweep_shortfall_error_names_numbers():
    searcher = staircase_index()
    with pytest.raises(ValidationError) as exc:
        bench.df_sweep(searcher, samples=50, max_df=100, repeats=1)
    assert "50" in str(exc.value) and "10" in str(exc.value)


def test_df_sweep_seed_reproducible():
    searcher = staircase_index()
    a = bench.df_sweep(searcher, samples=5, max_df=100, repeats=1, seed=9)
    b = bench.df_sweep(searcher, samples=5, max_df=100, repeats=1, seed=9)
    assert [row.term for row in a.rows] == [row.term for row in b.rows]


# -- file formats ------------------------------------------------------------------


def test_query_file_parsing(tmp_path):
    path = tmp_path / "queries.tsv"
    path.write_text("# comment\nq1\thello world\n\nq2\tfoo\n", encoding="utf-8")
    assert bench.read_query_file(str(path)) == [("q1", "hello world"), ("q2", "foo")]


def test_query_file_malformed_line(tmp_path):
    path = tmp_path / "queries.tsv"
    path.write_text("q1 no tab here\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        bench.read_query_file(str(path))


def test_csv_headers_and_rounding(tmp_path):
    query_report = bench.QueryBenchReport(
        rows=[bench.QueryLatencyRow("q1", 1.23456)],
        stats=bench.LatencyStats.from_latencies([1.23456], 1),
        warmup=0,
    )
    qpath = tmp_path / "q.csv"
    bench.write_query_csv(str(qpath), query_report)
    assert qpath.read_text() == "qid,latency_ms\nq1,1.235\n"

    sweep_report = bench.DfSweepReport(
        rows=[bench.DfSweepRow("hadoop", 42, 0.5)], pearson_r=1.0, repeats=1, seed=42
    )
    spath = tmp_path / "s.csv"
    bench.write_sweep_csv(str(spath), sweep_report)
    assert spath.read_text() == "term,df,latency_ms\nhadoop,42,0.500\n"

    through = bench.ThroughputReport.from_run(docs=3, postings=5, wall_seconds=0.5)
    ipath = tmp_path / "i.csv"
    bench.write_throughput_csv(str(ipath), bench.IndexBenchReport([through], through))
    assert (
        ipath.read_text()
        == "docs,postings,wall_seconds,postings_per_sec\n3,5,0.500000,10.000\n"
    )


def test_summary_column_order():
    stats = bench.LatencyStats(146.0, 106.0, 311.0, 1058.0, trials=3, n_queries=100)
    text = bench.format_latency_summary(stats)
    lines = text.splitlines()
    assert "mean,median,p90,max" in lines
    values = lines[lines.index("mean,median,p90,max") + 1]
    assert values == "146.000,106.000,311.000,1058.000"
    # Table-2-shaped row: label then the four figures in the same order
    table_row = [line for line in lines if line.startswith("selfsearch")][0]
    assert table_row.split() == ["selfsearch", "146", "106", "311", "1058"]
