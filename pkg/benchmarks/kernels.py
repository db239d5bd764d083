"""Microbenchmark: compiled kernels against their pure-Python twins.

Runs each hot kernel on a synthetic workload under both backends and
prints per-kernel throughput plus the speedup. With --end-to-end it also
times whole queries in two subprocesses, one per backend, since the
kernel choice is fixed at import time.

Usage:
    python3 benchmarks/kernels.py [--repeats 5] [--end-to-end]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time
from typing import Callable, Dict, List, Tuple

from selfsearch import _kernels_py

try:
    from selfsearch import _kernels
except ImportError:
    _kernels = None

SEP = b"\x1f"


def best_seconds(fn: Callable[[], object], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def make_workloads(rng: random.Random):
    data = rng.randbytes(4 * 1024 * 1024)
    vocab = [f"w{i:04d}" for i in range(2000)]
    cum = list(range(1, len(vocab) + 1))  # mildly skewed is enough here
    tokens = rng.choices(vocab, cum_weights=cum, k=200_000)
    prefix = b"hadoop" + SEP
    entries = [
        (prefix + b"%010d" % docid, b"%d" % rng.randint(1, 9))
        for docid in range(200_000)
    ]
    postings = [(docid, rng.randint(1, 9)) for docid in range(200_000)]
    return data, tokens, prefix, entries, postings


def bench_backend(mod, repeats: int, workloads) -> Dict[str, Tuple[float, float]]:
    """Returns kernel name -> (seconds, items) for one backend module."""
    data, tokens, prefix, entries, postings = workloads
    out: Dict[str, Tuple[float, float]] = {}
    out["fnv1a64"] = (
        best_seconds(lambda: mod.fnv1a64(data), repeats),
        float(len(data)),
    )
    out["count_tokens"] = (
        best_seconds(lambda: mod.count_tokens(tokens), repeats),
        float(len(tokens)),
    )
    out["decode_postings"] = (
        best_seconds(lambda: mod.decode_postings(entries, len(prefix)), repeats),
        float(len(entries)),
    )
    half = {docid: 1.0 for docid, _ in postings[: len(postings) // 2]}

    def accumulate_both():
        acc: Dict[int, float] = {}
        mod.accumulate_postings(acc, postings, 1.5, True)
        upd = dict(half)
        mod.accumulate_postings(upd, postings, 0.5, False)

    out["accumulate_postings"] = (
        best_seconds(accumulate_both, repeats),
        float(2 * len(postings)),
    )
    return out


def _fmt_rate(items: float, seconds: float, unit: str) -> str:
    rate = items / seconds
    if unit == "MB/s":
        return f"{rate / 1e6:10.1f} MB/s"
    return f"{rate / 1e6:10.2f} M/s"


def run_micro(repeats: int) -> None:
    workloads = make_workloads(random.Random(42))
    pure = bench_backend(_kernels_py, repeats, workloads)
    if _kernels is None:
        print("compiled backend not importable; showing pure python only")
    compiled = bench_backend(_kernels, repeats, workloads) if _kernels else None

    unit = {"fnv1a64": "MB/s"}
    print(f"{'kernel':<22}{'python':>16}{'cython':>16}{'speedup':>10}")
    for name, (psec, items) in pure.items():
        row = f"{name:<22}{_fmt_rate(items, psec, unit.get(name, 'M/s')):>16}"
        if compiled:
            csec, _ = compiled[name]
            row += f"{_fmt_rate(items, csec, unit.get(name, 'M/s')):>16}"
            row += f"{psec / csec:>9.1f}x"
        print(row)


def run_query_worker(n_docs: int, n_queries: int) -> None:
    """Subprocess body: index a synthetic corpus and time evaluate()."""
    from selfsearch import IndexWriter, Searcher, StorageConfig, open_storage
    from selfsearch.kernels import KERNEL_BACKEND
    from selfsearch.synth import synth_corpus, synth_queries

    storage = open_storage(StorageConfig(backend="memory"))
    IndexWriter(storage).build(synth_corpus(n_docs, vocab_size=2000, seed=42))
    searcher = Searcher(storage)
    term_lists = [q.split() for _, q in synth_queries(n_queries, vocab_size=2000, seed=42)]
    for terms in term_lists[:20]:
        searcher.evaluate(terms, 10)
    start = time.perf_counter()
    for terms in term_lists:
        searcher.evaluate(terms, 10)
    wall = time.perf_counter() - start
    print(json.dumps({"backend": KERNEL_BACKEND, "queries_per_sec": n_queries / wall}))


def run_end_to_end(n_docs: int, n_queries: int) -> None:
    print(f"\nend to end: {n_queries} queries over {n_docs} synthetic docs")
    rates: Dict[str, float] = {}
    for pure_flag in ("0", "1"):
        env = dict(os.environ, SELFSEARCH_PURE=pure_flag)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker",
             str(n_docs), str(n_queries)],
            env=env, capture_output=True, text=True, check=True,
        )
        result = json.loads(proc.stdout.strip().splitlines()[-1])
        rates[result["backend"]] = result["queries_per_sec"]
        print(f"  {result['backend']:<8} {result['queries_per_sec']:10.0f} queries/sec")
    if "cython" in rates and "python" in rates:
        print(f"  speedup  {rates['cython'] / rates['python']:10.2f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    parser.add_argument("--docs", type=int, default=5000)
    parser.add_argument("--queries", type=int, default=500)
    parser.add_argument("--worker", nargs=2, metavar=("DOCS", "QUERIES"))
    args = parser.parse_args()
    if args.worker:
        run_query_worker(int(args.worker[0]), int(args.worker[1]))
        return
    run_micro(args.repeats)
    if args.end_to_end:
        run_end_to_end(args.docs, args.queries)


if __name__ == "__main__":
    main()
