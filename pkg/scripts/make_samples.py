"""Regenerates the committed sample corpora and query files.

Run from the repository root:

    python3 scripts/make_samples.py

The outputs are deterministic; rerunning must reproduce the committed
bytes, so the interpreter's PRNG stream is pinned by the seeds below.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from selfsearch.synth import synth_corpus, synth_queries


def write_corpus(path, docs):
    with open(path, "w", encoding="utf-8") as f:
        for doc in docs:
            f.write(json.dumps({"id": doc.external_id, "text": doc.text}, ensure_ascii=False))
            f.write("\n")
    print(f"{path}: {len(docs)} docs")


def write_queries(path, queries):
    with open(path, "w", encoding="utf-8") as f:
        f.write("# qid<TAB>query text\n")
        for qid, text in queries:
            f.write(f"{qid}\t{text}\n")
    print(f"{path}: {len(queries)} queries")


def main():
    root = os.path.join(os.path.dirname(__file__), "..")
    sample = os.path.join(root, "sample")
    os.makedirs(sample, exist_ok=True)
    write_corpus(
        os.path.join(sample, "corpus-10k.jsonl"),
        synth_corpus(10_000, vocab_size=2000, seed=42, tweet_flavor=True),
    )
    write_corpus(
        os.path.join(sample, "corpus-1k.jsonl"),
        synth_corpus(1_000, vocab_size=800, seed=7, tweet_flavor=True),
    )
    write_queries(
        os.path.join(sample, "queries-100.tsv"),
        synth_queries(100, vocab_size=2000, seed=42),
    )
    write_queries(
        os.path.join(sample, "queries-20.tsv"),
        synth_queries(20, vocab_size=800, seed=7),
    )


if __name__ == "__main__":
    main()
