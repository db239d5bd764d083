"""Tokenization, posting-key encoding, and document ingestion.

The inverted index is a key layout convention over the storage layer:

* postings store: key = term bytes + 0x1F + zero-padded 10-digit docid,
  value = decimal term frequency. One term's postings list is exactly the
  key range under its prefix, docid-ascending.
* df store: key = term bytes, value = decimal document frequency.
* docs store: key = zero-padded docid, value = JSON {"id", "text"}.
* meta store: collection statistics, tokenizer options, readiness flag.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from selfsearch.errors import (
    IngestionError,
    NotReadyError,
    ValidationError,
)
from selfsearch.kernels import count_tokens
from selfsearch.storage import Storage

SEP = b"\x1f"
DOCID_DIGITS = 10
MAX_DOCID = 10 ** DOCID_DIGITS

META_STATS_KEY = b"stats"
META_READY_KEY = b"ready"
META_TOKENIZER_KEY = b"tokenizer"


@dataclass
class Document:
    external_id: str
    text: str


@dataclass
class TokenizerOptions:
    lowercase: bool = False
    max_token_bytes: int = 64

    def __post_init__(self) -> None:
        if self.max_token_bytes < 1:
            raise ValidationError("max_token_bytes must be >= 1")

    def to_json(self) -> bytes:
        return json.dumps(
            {"lowercase": self.lowercase, "max_token_bytes": self.max_token_bytes},
            sort_keys=True,
            separators=(",", ":"),
        ).encode()

    @classmethod
    def from_json(cls, raw: bytes) -> "TokenizerOptions":
        obj = json.loads(raw)
        return cls(lowercase=obj["lowercase"], max_token_bytes=obj["max_token_bytes"])


@dataclass
class CollectionStats:
    doc_count: int = 0
    total_tokens: int = 0
    unique_terms: int = 0
    total_postings: int = 0

    def to_json(self) -> bytes:
        return json.dumps(
            {
                "doc_count": self.doc_count,
                "total_tokens": self.total_tokens,
                "unique_terms": self.unique_terms,
                "total_postings": self.total_postings,
            },
            sort_keys=True,
            separators=(",", ":"),
        ).encode()

    @classmethod
    def from_json(cls, raw: bytes) -> "CollectionStats":
        obj = json.loads(raw)
        return cls(
            doc_count=obj["doc_count"],
            total_tokens=obj["total_tokens"],
            unique_terms=obj["unique_terms"],
            total_postings=obj["total_postings"],
        )


class Tokenizer:
    """Whitespace tokenizer with control-byte sanitation and a length cap.

    Splits on Unicode whitespace runs, strips characters below U+0020 out
    of tokens (dropping tokens that end up empty), truncates tokens longer
    than max_token_bytes of UTF-8, and lowercases only when asked to.
    Keeps a running count of truncated tokens for reporting.
    """

    def __init__(self, options: Optional[TokenizerOptions] = None):
        self.options = options or TokenizerOptions()
        self.truncated = 0

    def tokenize(self, text: str) -> List[str]:
        opts = self.options
        out: List[str] = []
        for raw in text.split():
            if opts.lowercase:
                raw = raw.lower()
            if any(ch < "\x20" for ch in raw):
                raw = "".join(ch for ch in raw if ch >= "\x20")
                if not raw:
                    continue
            encoded = raw.encode("utf-8")
            if len(encoded) > opts.max_token_bytes:
                raw = encoded[: opts.max_token_bytes].decode("utf-8", "ignore")
                self.truncated += 1
                if not raw:
                    continue
            out.append(raw)
        return out


def tokenize(text: str, options: Optional[TokenizerOptions] = None) -> List[str]:
    return Tokenizer(options).tokenize(text)


def encode_posting_key(term: str, docid: int) -> bytes:
    term_bytes = term.encode("utf-8")
    if not term_bytes:
        raise ValidationError("term must be non-empty")
    if any(b < 0x20 for b in term_bytes):
        raise ValidationError(f"term contains control bytes: {term!r}")
    if not 0 <= docid < MAX_DOCID:
        raise ValidationError(f"docid out of range: {docid}")
    return term_bytes + SEP + b"%0*d" % (DOCID_DIGITS, docid)


def decode_posting_key(key: bytes) -> Tuple[str, int]:
    term_bytes, sep, docid_bytes = key.rpartition(SEP)
    if not sep or len(docid_bytes) != DOCID_DIGITS:
        raise ValidationError(f"malformed posting key: {key!r}")
    return term_bytes.decode("utf-8"), int(docid_bytes)


def term_prefix(term: str) -> bytes:
    """Range-scan prefix covering exactly one term's postings."""
    return term.encode("utf-8") + SEP


def encode_doc_key(docid: int) -> bytes:
    return b"%0*d" % (DOCID_DIGITS, docid)


def encode_doc_value(external_id: str, text: str) -> bytes:
    return json.dumps(
        {"id": external_id, "text": text}, ensure_ascii=False, separators=(",", ":")
    ).encode()


def decode_doc_value(raw: bytes) -> Document:
    obj = json.loads(raw)
    return Document(external_id=obj["id"], text=obj["text"])


def recount_df(docs: Iterable[Document], options: Optional[TokenizerOptions] = None) -> Dict[str, int]:
    """Document frequencies by a separate pass over the collection."""
    tok = Tokenizer(options)
    df: Dict[str, int] = {}
    for doc in docs:
        for term in set(tok.tokenize(doc.text)):
            df[term] = df.get(term, 0) + 1
    return df


class IndexWriter:
    """Ingests documents into the four stores.

    Postings and doc records are buffered and written in batches of
    roughly ``batch_size`` postings (whole documents only). Document
    frequencies accumulate in memory and hit the df store at finalize
    time, together with the collection stats and the readiness flag.
    """

    def __init__(
        self,
        storage: Storage,
        options: Optional[TokenizerOptions] = None,
        batch_size: int = 1000,
    ):
        if batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        self.storage = storage
        self.tokenizer = Tokenizer(options)
        self.batch_size = batch_size
        self.df: Dict[str, int] = {}
        self.stats = CollectionStats()
        self._seen_ids: Set[str] = set()
        self._next_docid = 0
        self._posting_buf: List[Tuple[bytes, bytes]] = []
        self._docs_buf: List[Tuple[bytes, bytes]] = []
        if storage.get("meta", META_STATS_KEY) is not None:
            self._resume()
        storage.put("meta", META_READY_KEY, b"0")

    def _resume(self) -> None:
        """Rebuild in-memory ingestion state from an existing index."""
        stored = self.storage.get("meta", META_TOKENIZER_KEY)
        if stored is not None:
            self.tokenizer = Tokenizer(TokenizerOptions.from_json(stored))
        total_tokens = 0
        for key, value in self.storage.range_scan("docs"):
            doc = decode_doc_value(value)
            self._seen_ids.add(doc.external_id)
            self._next_docid = max(self._next_docid, int(key) + 1)
            total_tokens += len(self.tokenizer.tokenize(doc.text))
        df: Dict[str, int] = {}
        total_postings = 0
        for key, _ in self.storage.range_scan("postings"):
            term, _docid = decode_posting_key(key)
            df[term] = df.get(term, 0) + 1
            total_postings += 1
        self.df = df
        self.stats = CollectionStats(
            doc_count=len(self._seen_ids),
            total_tokens=total_tokens,
            unique_terms=len(df),
            total_postings=total_postings,
        )

    def add_document(self, doc: Document) -> int:
        if not doc.external_id:
            raise ValidationError("external_id must be non-empty")
        if doc.external_id in self._seen_ids:
            raise IngestionError(f"duplicate external_id: {doc.external_id}")
        if self._next_docid >= MAX_DOCID:
            raise ValidationError("docid space exhausted")
        docid = self._next_docid
        self._next_docid += 1
        self._seen_ids.add(doc.external_id)

        tokens = self.tokenizer.tokenize(doc.text)
        tf = count_tokens(tokens)
        for term in tf:
            self.df[term] = self.df.get(term, 0) + 1
        self._posting_buf.extend(
            (encode_posting_key(term, docid), b"%d" % freq) for term, freq in tf.items()
        )
        self._docs_buf.append((encode_doc_key(docid), encode_doc_value(doc.external_id, doc.text)))

        self.stats.doc_count += 1
        self.stats.total_tokens += len(tokens)
        self.stats.total_postings += len(tf)
        if len(self._posting_buf) >= self.batch_size:
            self._flush_buffers()
        return docid

    def _flush_buffers(self) -> None:
        if self._docs_buf:
            self.storage.batch_put("docs", self._docs_buf)
            self._docs_buf = []
        if self._posting_buf:
            self.storage.batch_put("postings", self._posting_buf)
            self._posting_buf = []

    def build(self, docs: Iterable[Document], two_pass_df: bool = False) -> CollectionStats:
        """Ingest a whole stream and finalize.

        With two_pass_df the document frequencies written at finalize come
        from an independent second pass over the collection instead of the
        counts accumulated during ingestion; the result is identical.
        """
        if two_pass_df:
            docs = list(docs)
        for doc in docs:
            self.add_document(doc)
        if two_pass_df:
            self.df = recount_df(docs, self.tokenizer.options)
        return self.finalize()

    def finalize(self) -> CollectionStats:
        self._flush_buffers()
        self.stats.unique_terms = len(self.df)
        df_entries = [
            (term.encode("utf-8"), b"%d" % freq) for term, freq in sorted(self.df.items())
        ]
        for start in range(0, len(df_entries), self.batch_size):
            self.storage.batch_put("df", df_entries[start: start + self.batch_size])
        self.storage.put("meta", META_STATS_KEY, self.stats.to_json())
        self.storage.put("meta", META_TOKENIZER_KEY, self.tokenizer.options.to_json())
        self.storage.put("meta", META_READY_KEY, b"1")
        self.storage.flush()
        return self.stats


def collection_stats(storage: Storage) -> CollectionStats:
    """Stats as persisted in the meta store of a finalized index."""
    ready = storage.get("meta", META_READY_KEY)
    raw = storage.get("meta", META_STATS_KEY)
    if ready != b"1" or raw is None:
        raise NotReadyError("index is not finalized")
    return CollectionStats.from_json(raw)


def stored_tokenizer_options(storage: Storage) -> TokenizerOptions:
    raw = storage.get("meta", META_TOKENIZER_KEY)
    if raw is None:
        raise NotReadyError("index is not finalized")
    return TokenizerOptions.from_json(raw)


def get_document(storage: Storage, docid: int) -> Optional[Document]:
    raw = storage.get("docs", encode_doc_key(docid))
    return None if raw is None else decode_doc_value(raw)


@dataclass
class CorpusReport:
    documents: int = 0
    skipped_lines: int = 0


class JsonlCorpus:
    """JSON-lines corpus reader: one {"id", "text"} object per line.

    Malformed lines are counted and skipped, or abort the read when
    strict is set. Iterating twice re-reads the file.
    """

    def __init__(self, path: str, strict: bool = False):
        self.path = path
        self.strict = strict
        self.report = CorpusReport()

    def __iter__(self) -> Iterator[Document]:
        self.report = CorpusReport()
        with open(self.path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    external_id = obj["id"]
                    text = obj["text"]
                    if not isinstance(external_id, str) or not isinstance(text, str):
                        raise ValueError("id and text must be strings")
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    if self.strict:
                        raise ValidationError(
                            f"{self.path}:{lineno}: malformed corpus line: {exc}"
                        ) from exc
                    self.report.skipped_lines += 1
                    continue
                self.report.documents += 1
                yield Document(external_id=external_id, text=text)
