import {
  asciiInt,
  CollectionStats,
  decodeDocValue,
  encodeDocKey,
  META_READY_KEY,
  META_STATS_KEY,
  META_TOKENIZER_KEY,
  statsFromJson,
  termPrefix,
  tokenizerOptionsFromJson,
} from "./keys.js";
import { MemoryStorage } from "./store.js";
import { Tokenizer } from "./tokenizer.js";

export interface EngineResult {
  rank: number;
  docid: number;
  externalId: string;
  score: number;
}

export interface EngineResponse {
  results: EngineResult[];
  latencyMs: number;
  termsUsed: number;
  termsSkipped: number;
}

const decoder = new TextDecoder();

function now(): number {
  return typeof performance !== "undefined" ? performance.now() : Date.now();
}

/**
 * Query evaluation over a finalized index. Scoring is tf-idf with raw
 * term frequency and idf = ln(1 + N/df); a document matches only if it
 * contains the first query term. Floating-point contribution order
 * matches the native engine, so scores agree bit for bit.
 */
export class Searcher {
  readonly stats: CollectionStats;
  readonly tokenizer: Tokenizer;

  constructor(readonly storage: MemoryStorage) {
    const ready = storage.get("meta", META_READY_KEY);
    if (ready === null || decoder.decode(ready) !== "1") {
      throw new Error("index is not finalized");
    }
    const rawStats = storage.get("meta", META_STATS_KEY);
    if (rawStats === null) throw new Error("index has no stats");
    this.stats = statsFromJson(rawStats);
    const rawOptions = storage.get("meta", META_TOKENIZER_KEY);
    this.tokenizer = new Tokenizer(
      rawOptions !== null ? tokenizerOptionsFromJson(rawOptions) : undefined,
    );
  }

  lookupDf(term: string): number {
    const raw = this.storage.get("df", new TextEncoder().encode(term));
    return raw === null ? 0 : asciiInt(raw);
  }

  idf(df: number): number {
    return Math.log(1 + this.stats.docCount / df);
  }

  postings(term: string): Array<{ docid: number; tf: number }> {
    const prefix = termPrefix(term);
    return this.storage.rangeScan("postings", prefix).map(([key, value]) => ({
      docid: parseInt(decoder.decode(key.subarray(prefix.length)), 10),
      tf: asciiInt(value),
    }));
  }

  evaluate(
    terms: string[],
    k: number,
  ): { ranked: Array<{ docid: number; score: number }>; skipped: number } {
    if (k < 1) throw new Error(`k must be >= 1, got ${k}`);
    if (terms.length === 0) return { ranked: [], skipped: 0 };
    const dfs = terms.map((term) => ({ term, df: this.lookupDf(term) }));
    const usable = dfs.filter((e) => e.df > 0);
    const skipped = terms.length - usable.length;
    if (dfs[0].df === 0) return { ranked: [], skipped };

    const acc = new Map<number, number>();
    const first = usable[0];
    const firstIdf = this.idf(first.df);
    for (const { docid, tf } of this.postings(first.term)) {
      acc.set(docid, (acc.get(docid) ?? 0) + tf * firstIdf);
    }
    for (const { term, df } of usable.slice(1)) {
      const weight = this.idf(df);
      for (const { docid, tf } of this.postings(term)) {
        const prev = acc.get(docid);
        if (prev !== undefined) acc.set(docid, prev + tf * weight);
      }
    }
    const ranked = [...acc.entries()]
      .map(([docid, score]) => ({ docid, score }))
      .sort((a, b) => b.score - a.score || a.docid - b.docid)
      .slice(0, k);
    return { ranked, skipped };
  }

  getDocument(docid: number): { id: string; text: string } | null {
    const raw = this.storage.get("docs", encodeDocKey(docid));
    return raw === null ? null : decodeDocValue(raw);
  }

  search(text: string, k = 10): EngineResponse {
    const terms = this.tokenizer.tokenize(text);
    const start = now();
    const { ranked, skipped } = this.evaluate(terms, k);
    const latencyMs = now() - start;
    const results = ranked.map(({ docid, score }, i) => ({
      rank: i + 1,
      docid,
      externalId: this.getDocument(docid)?.id ?? String(docid),
      score,
    }));
    return {
      results,
      latencyMs,
      termsUsed: terms.length - skipped,
      termsSkipped: skipped,
    };
  }
}

/** Standard 6-column run format: qid Q0 external_id rank score tag. */
export function formatRunLines(
  qid: string,
  response: EngineResponse,
  tag = "selfsearch",
): string[] {
  return response.results.map(
    (r) => `${qid} Q0 ${r.externalId} ${r.rank} ${r.score.toFixed(6)} ${tag}`,
  );
}
