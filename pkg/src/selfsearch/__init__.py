"""Self-contained full-text search engine on a sorted key-value store."""

from selfsearch.errors import (
    CorruptionError,
    IngestionError,
    LockError,
    NotReadyError,
    SelfSearchError,
    StorageError,
    UsageError,
    ValidationError,
)
from selfsearch.indexing import (
    CollectionStats,
    Document,
    IndexWriter,
    JsonlCorpus,
    TokenizerOptions,
    collection_stats,
    tokenize,
)
from selfsearch.kernels import KERNEL_BACKEND
from selfsearch.query import Searcher, SearchResponse, SearchResult, oracle_evaluate
from selfsearch.snapshot import export_snapshot, import_snapshot
from selfsearch.storage import Storage, StorageConfig, open_storage

__version__ = "0.1.0"

__all__ = [
    "CollectionStats",
    "CorruptionError",
    "Document",
    "IndexWriter",
    "IngestionError",
    "JsonlCorpus",
    "KERNEL_BACKEND",
    "LockError",
    "NotReadyError",
    "Searcher",
    "SearchResponse",
    "SearchResult",
    "SelfSearchError",
    "Storage",
    "StorageConfig",
    "TokenizerOptions",
    "UsageError",
    "ValidationError",
    "collection_stats",
    "export_snapshot",
    "import_snapshot",
    "open_storage",
    "oracle_evaluate",
    "tokenize",
    "__version__",
]
