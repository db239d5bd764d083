"""Regenerates the native-engine fixtures the web demo tests compare against.

Builds an in-memory index over sample/corpus-1k.jsonl, runs
sample/queries-20.tsv at k=10, and writes the run-file lines plus the
exported snapshot container to frontend/test/fixtures/. Rerun after any
change that affects scoring or the on-disk formats.
"""

from pathlib import Path

from selfsearch import IndexWriter, JsonlCorpus, Searcher, StorageConfig, open_storage
from selfsearch.bench import read_query_file
from selfsearch.query import format_run_lines
from selfsearch.snapshot import export_snapshot

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "test" / "fixtures"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    storage = open_storage(StorageConfig(backend="memory"))
    IndexWriter(storage).build(JsonlCorpus(ROOT / "sample" / "corpus-1k.jsonl"))
    searcher = Searcher(storage)

    lines = []
    for qid, text in read_query_file(str(ROOT / "sample" / "queries-20.tsv")):
        lines.extend(format_run_lines(qid, searcher.search(text, k=10)))
    run_path = FIXTURES / "native-run-1k.txt"
    run_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    snap_path = FIXTURES / "native-snapshot-1k.snap"
    snap_path.write_bytes(export_snapshot(storage))
    storage.close()
    print(f"wrote {run_path} ({len(lines)} lines)")
    print(f"wrote {snap_path} ({snap_path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
