import {
  asciiOfInt,
  CollectionStats,
  encodeDocKey,
  encodeDocValue,
  encodePostingKey,
  META_READY_KEY,
  META_STATS_KEY,
  META_TOKENIZER_KEY,
  statsToJson,
  tokenizerOptionsToJson,
} from "./keys.js";
import { MemoryStorage } from "./store.js";
import { DEFAULT_OPTIONS, Tokenizer, TokenizerOptions } from "./tokenizer.js";

export interface DocumentInput {
  id: string;
  text: string;
}

const encoder = new TextEncoder();

/**
 * Incremental index builder over the in-memory storage, mirroring the
 * native writer: docids are assigned in ingest order, term frequencies
 * land in the postings store per document, and finalize() writes the df
 * table, collection stats, and the ready flag.
 */
export class IndexBuild {
  readonly tokenizer: Tokenizer;
  private seen = new Set<string>();
  private df = new Map<string, number>();
  private nextDocid = 0;
  private totalTokens = 0;
  private totalPostings = 0;
  private finalized = false;

  constructor(
    readonly storage: MemoryStorage,
    options: TokenizerOptions = DEFAULT_OPTIONS,
  ) {
    this.tokenizer = new Tokenizer(options);
    storage.put("meta", META_READY_KEY, encoder.encode("0"));
  }

  addDocument(doc: DocumentInput): number {
    if (this.finalized) throw new Error("index already finalized");
    if (this.seen.has(doc.id)) {
      throw new Error(`duplicate document id: ${doc.id}`);
    }
    this.seen.add(doc.id);
    const docid = this.nextDocid++;
    const tokens = this.tokenizer.tokenize(doc.text);
    this.totalTokens += tokens.length;
    const tf = new Map<string, number>();
    for (const token of tokens) {
      tf.set(token, (tf.get(token) ?? 0) + 1);
    }
    for (const [term, count] of tf) {
      this.storage.put("postings", encodePostingKey(term, docid), asciiOfInt(count));
      this.df.set(term, (this.df.get(term) ?? 0) + 1);
    }
    this.totalPostings += tf.size;
    this.storage.put("docs", encodeDocKey(docid), encodeDocValue(doc.id, doc.text));
    return docid;
  }

  finalize(): CollectionStats {
    for (const [term, count] of this.df) {
      this.storage.put("df", encoder.encode(term), asciiOfInt(count));
    }
    const stats: CollectionStats = {
      docCount: this.nextDocid,
      totalTokens: this.totalTokens,
      uniqueTerms: this.df.size,
      totalPostings: this.totalPostings,
    };
    this.storage.put("meta", META_STATS_KEY, statsToJson(stats));
    this.storage.put(
      "meta",
      META_TOKENIZER_KEY,
      tokenizerOptionsToJson(this.tokenizer.options),
    );
    this.storage.put("meta", META_READY_KEY, encoder.encode("1"));
    this.finalized = true;
    return stats;
  }
}

export function buildIndex(
  docs: DocumentInput[],
  options: TokenizerOptions = DEFAULT_OPTIONS,
): { storage: MemoryStorage; stats: CollectionStats } {
  const storage = new MemoryStorage();
  const build = new IndexBuild(storage, options);
  for (const doc of docs) build.addDocument(doc);
  return { storage, stats: build.finalize() };
}
