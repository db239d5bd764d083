"""Command-line interface.

Exit codes: 0 success, 1 validation or usage error, 2 IO/storage error.
Data goes to stdout, diagnostics (including search latency) to stderr,
so `search` output for a fixed index and query is byte-identical across
invocations.
"""

import argparse
import os
import shutil
import sys
from typing import List, Optional

from selfsearch import bench
from selfsearch.errors import StorageError, UsageError, ValidationError
from selfsearch.indexing import IndexWriter, JsonlCorpus, TokenizerOptions, get_document
from selfsearch.query import Searcher, format_run_lines
from selfsearch.snapshot import write_snapshot
from selfsearch.storage import Storage, StorageConfig, open_storage


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on bad usage, not argparse's 2
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="selfsearch", description="Full-text search on a sorted key-value store")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index from a JSON-lines corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--backend", choices=["lsm", "memory"], default="lsm")
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--overwrite", action="store_true")

    p = sub.add_parser("search", help="run one query against an index")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--run-out")

    p = sub.add_parser("repl", help="interactive query prompt")
    p.add_argument("--data-dir", required=True)

    p = sub.add_parser("bench-index", help="time full index builds")
    p.add_argument("--input", required=True)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--backend", choices=["lsm", "memory"], default="lsm")
    p.add_argument("--out")

    p = sub.add_parser("bench-query", help="per-query latency statistics")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("df-sweep", help="single-term latency vs document frequency")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-df", type=int, default=1000)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")

    p = sub.add_parser("compact", help="merge all segments per store")
    p.add_argument("--data-dir", required=True)

    p = sub.add_parser("stats", help="collection and storage statistics")
    p.add_argument("--data-dir", required=True)

    p = sub.add_parser("export-snapshot", help="serialize all stores into one container file")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--out", required=True)

    return parser


def _open_existing(data_dir: str) -> Storage:
    if not os.path.isdir(data_dir):
        raise StorageError(f"data dir not found: {data_dir}")
    return open_storage(StorageConfig(data_dir=data_dir, backend="lsm"))


def _print_stats(stats) -> None:
    print(f"doc_count={stats.doc_count}")
    print(f"total_tokens={stats.total_tokens}")
    print(f"unique_terms={stats.unique_terms}")
    print(f"total_postings={stats.total_postings}")


def _cmd_index(args) -> int:
    if args.backend == "lsm":
        if os.path.isdir(args.data_dir) and os.listdir(args.data_dir):
            if not args.overwrite:
                raise ValidationError(
                    f"data dir {args.data_dir} is not empty; pass --overwrite to replace it"
                )
            shutil.rmtree(args.data_dir)
        config = StorageConfig(data_dir=args.data_dir, backend="lsm")
    else:
        config = StorageConfig(backend="memory")
        print("note: memory backend persists nothing", file=sys.stderr)
    corpus = JsonlCorpus(args.input, strict=args.strict)
    options = TokenizerOptions(lowercase=args.lowercase)
    with open_storage(config) as storage:
        writer = IndexWriter(storage, options=options, batch_size=args.batch_size)
        stats = writer.build(corpus)
        _print_stats(stats)
        if corpus.report.skipped_lines:
            print(f"skipped_lines={corpus.report.skipped_lines}", file=sys.stderr)
        if writer.tokenizer.truncated:
            print(f"truncated_tokens={writer.tokenizer.truncated}", file=sys.stderr)
    return 0


def _cmd_search(args) -> int:
    with _open_existing(args.data_dir) as storage:
        searcher = Searcher(storage)
        response = searcher.search(args.query, k=args.top_k)
        for result in response.results:
            print(f"{result.rank} {result.external_id} {result.score:.6f}")
        if not response.results:
            print("(no results)", file=sys.stderr)
        print(
            f"latency_ms={response.latency_ms:.3f} "
            f"terms_used={response.terms_used} terms_skipped={response.terms_skipped}",
            file=sys.stderr,
        )
        if args.run_out:
            with open(args.run_out, "w", encoding="utf-8") as f:
                for line in format_run_lines("1", response):
                    f.write(line + "\n")
    return 0


def _cmd_repl(args) -> int:
    with _open_existing(args.data_dir) as storage:
        searcher = Searcher(storage)
        k = 10
        print(f"{searcher.stats.doc_count} docs ready; :k <n> sets k, :stats, :quit")
        while True:
            try:
                line = input("query> ")
            except EOFError:
                print()
                break
            line = line.strip()
            if not line:
                continue
            if line in (":quit", ":q"):
                break
            if line == ":stats":
                _print_stats(searcher.stats)
                continue
            if line.split()[0] == ":k":
                parts = line.split()
                if len(parts) == 2 and parts[1].isdigit() and int(parts[1]) >= 1:
                    k = int(parts[1])
                    print(f"k={k}")
                else:
                    print("usage: :k <n>")
                continue
            response = searcher.search(line, k)
            for result in response.results:
                doc = get_document(storage, result.docid)
                excerpt = doc.text[:80] if doc else ""
                print(f"{result.rank:2d} {result.external_id} {result.score:.6f} {excerpt}")
            if not response.results:
                print("(no results)")
            print(f"latency_ms={response.latency_ms:.3f}")
    return 0


def _cmd_bench_index(args) -> int:
    corpus = JsonlCorpus(args.input)
    docs = list(corpus)
    os.makedirs(args.data_dir, exist_ok=True)

    trial_dirs: List[str] = []

    def factory() -> Storage:
        if args.backend == "memory":
            return open_storage(StorageConfig(backend="memory"))
        trial_dir = os.path.join(args.data_dir, f"trial-{len(trial_dirs)}")
        trial_dirs.append(trial_dir)
        if os.path.isdir(trial_dir):
            shutil.rmtree(trial_dir)
        return open_storage(StorageConfig(data_dir=trial_dir, backend="lsm"))

    report = bench.measure_indexing(docs, factory, trials=args.trials)
    print("trial docs postings wall_seconds postings_per_sec docs_per_sec")
    for i, row in enumerate(report.per_trial, 1):
        print(
            f"{i} {row.docs} {row.postings} {row.wall_seconds:.6f} "
            f"{row.postings_per_sec:.3f} {row.docs_per_sec:.3f}"
        )
    mean = report.mean
    print(
        f"mean {mean.docs} {mean.postings} {mean.wall_seconds:.6f} "
        f"{mean.postings_per_sec:.3f} {mean.docs_per_sec:.3f}"
    )
    if args.out:
        bench.write_throughput_csv(args.out, report)
    return 0


def _cmd_bench_query(args) -> int:
    queries = bench.read_query_file(args.queries)
    with _open_existing(args.data_dir) as storage:
        searcher = Searcher(storage)
        report = bench.measure_queries(searcher, queries, trials=args.trials, warmup=args.warmup)
    print(bench.format_latency_summary(report.stats))
    if args.out:
        bench.write_query_csv(args.out, report)
    return 0


def _cmd_df_sweep(args) -> int:
    with _open_existing(args.data_dir) as storage:
        searcher = Searcher(storage)
        report = bench.df_sweep(
            searcher,
            samples=args.samples,
            max_df=args.max_df,
            repeats=args.repeats,
            seed=args.seed,
        )
    print(
        f"samples={len(report.rows)} max_df={args.max_df} repeats={report.repeats} "
        f"seed={report.seed} pearson_r={report.pearson_r:.3f}"
    )
    if args.out:
        bench.write_sweep_csv(args.out, report)
    return 0


def _cmd_compact(args) -> int:
    with _open_existing(args.data_dir) as storage:
        storage.compact()
        stats = storage.stats()
        for name, store in stats.stores.items():
            print(f"store {name}: entries={store.entry_count} segments={store.segment_count}")
    return 0


def _cmd_stats(args) -> int:
    from selfsearch.indexing import collection_stats

    with _open_existing(args.data_dir) as storage:
        _print_stats(collection_stats(storage))
        stats = storage.stats()
        for name, store in stats.stores.items():
            print(f"store {name}: entries={store.entry_count} segments={store.segment_count}")
    return 0


def _cmd_export_snapshot(args) -> int:
    with _open_existing(args.data_dir) as storage:
        n = write_snapshot(storage, args.out)
        print(f"wrote {n} bytes to {args.out}")
    return 0


_HANDLERS = {
    "index": _cmd_index,
    "search": _cmd_search,
    "repl": _cmd_repl,
    "bench-index": _cmd_bench_index,
    "bench-query": _cmd_bench_query,
    "df-sweep": _cmd_df_sweep,
    "compact": _cmd_compact,
    "stats": _cmd_stats,
    "export-snapshot": _cmd_export_snapshot,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StorageError as exc:
        print(f"storage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
